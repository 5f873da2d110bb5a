//! Named states used throughout the protocols.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::ket::Ket;
use crate::error::{Error, Result};

/// `exp(2πi·k/d)`.
pub fn root_of_unity(d: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * ((k % d) as f64) / d as f64)
}

/// Fourier basis ket `|f_m> = (1/√d) Σ_j exp(+2πi·jm/d) |j>`.
pub fn fourier_ket(d: usize, m: usize) -> Result<Ket> {
    if d == 0 {
        return Err(Error::InvalidDimension("d must be positive".into()));
    }
    if m >= d {
        return Err(Error::OutOfRange {
            what: "Fourier index",
            value: m,
            bound: d,
        });
    }
    let s = 1.0 / (d as f64).sqrt();
    Ok(Ket::unnormalized(
        (0..d).map(|j| root_of_unity(d, j * m) * s).collect(),
    ))
}

pub fn fourier_basis(d: usize) -> Result<Vec<Ket>> {
    (0..d).map(|m| fourier_ket(d, m)).collect()
}

pub fn computational_basis(d: usize) -> Vec<Ket> {
    (0..d)
        .map(|i| Ket::basis(d, i).expect("index < d"))
        .collect()
}

/// `|Φ_x> = (1/√d) Σ_j exp(2πi·jx/d) |j>|j>`.
pub fn phi_x(d: usize, x: usize) -> Result<Ket> {
    if x >= d {
        return Err(Error::OutOfRange {
            what: "message",
            value: x,
            bound: d,
        });
    }
    let s = 1.0 / (d as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        amps[j * d + j] = root_of_unity(d, j * x) * s;
    }
    Ok(Ket::unnormalized(amps))
}

/// `|Φ+> = (1/√d) Σ_j |jj>`.
pub fn phi_plus(d: usize) -> Ket {
    phi_x(d, 0).expect("x = 0 < d")
}

/// `(1/√d) Σ_j e^{iφ_j} |j>^{⊗n}` for the given phases.
pub fn phased_ghz(d: usize, n: usize, phases: &[f64]) -> Result<Ket> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidDimension("GHZ needs d, n ≥ 1".into()));
    }
    if phases.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: phases.len(),
        });
    }
    let dim = crate::numeric::checked_pow(d, n)
        .ok_or_else(|| Error::InvalidDimension("GHZ dimension overflow".into()))?;
    crate::numeric::policy().guard(dim)?;
    // |j...j> has index j·(d^{n-1} + ... + 1)
    let step = (dim - 1) / (d - 1).max(1);
    let s = 1.0 / (d as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (j, &phi) in phases.iter().enumerate() {
        let idx = if d == 1 { 0 } else { j * step };
        amps[idx] = Complex64::from_polar(s, phi);
    }
    Ok(Ket::unnormalized(amps))
}

/// `|GHZ_n> = (1/√d) Σ_j |j>^{⊗n}`.
pub fn ghz(d: usize, n: usize) -> Result<Ket> {
    phased_ghz(d, n, &vec![0.0; d])
}

/// `Σ_j √λ_j |jj>` for a Schmidt spectrum (not validated here).
pub fn schmidt_form(spectrum: &[f64]) -> Ket {
    let d = spectrum.len();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for (j, &l) in spectrum.iter().enumerate() {
        amps[j * d + j] = Complex64::new(l.max(0.0).sqrt(), 0.0);
    }
    Ket::unnormalized(amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_fourier_is_hadamard() {
        let h = 1.0 / 2f64.sqrt();
        let f0 = fourier_ket(2, 0).unwrap();
        let f1 = fourier_ket(2, 1).unwrap();
        assert!((f0.as_slice()[0].re - h).abs() < 1e-15 && (f0.as_slice()[1].re - h).abs() < 1e-15);
        assert!((f1.as_slice()[0].re - h).abs() < 1e-15 && (f1.as_slice()[1].re + h).abs() < 1e-15);
    }

    #[test]
    fn qutrit_fourier_uses_positive_exponent() {
        let f = fourier_ket(3, 1).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let s = 1.0 / 3f64.sqrt();
        let expect = [Complex64::new(s, 0.0), w * s, w * w * s];
        for (a, b) in f.as_slice().iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn fourier_errors() {
        assert!(fourier_ket(0, 0).is_err());
        assert!(fourier_ket(3, 3).is_err());
    }

    #[test]
    fn fourier_gram_is_identity() {
        for d in 1..=7 {
            let b = fourier_basis(d).unwrap();
            for (i, u) in b.iter().enumerate() {
                for (j, v) in b.iter().enumerate() {
                    let g = u.inner(v);
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((g - Complex64::new(e, 0.0)).norm() < 1e-12, "d={d} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn ghz_support() {
        let g = ghz(3, 3).unwrap();
        let nz: Vec<usize> = g
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(nz, vec![0, 13, 26]);
        assert!((g.norm() - 1.0).abs() < 1e-15);
    }
}
