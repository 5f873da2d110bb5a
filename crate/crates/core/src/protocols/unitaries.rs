use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{checked_pow, policy};
use crate::tensor::states::root_of_unity;
use crate::tensor::Operator;

fn check_value(what: &'static str, value: usize, d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension("d must be ≥ 1".into()));
    }
    if value >= d {
        return Err(Error::OutOfRange { what, value, bound: d });
    }
    Ok(())
}

fn phase_diagonal(d: usize, m: usize) -> Operator {
    Operator::diagonal(&(0..d).map(|j| root_of_unity(d, j * m)).collect::<Vec<_>>())
}

/// `U_x = Σ_j exp(2πi·jx/d) |j><j|`; `(U_x ⊗ I)|Φ+> = |Φ_x>`.
pub fn phase_encoding_unitary(x: usize, d: usize) -> Result<Operator> {
    check_value("message", x, d)?;
    Ok(phase_diagonal(d, x))
}

/// Undoes a Fourier outcome `m` of the control on one receiver:
/// `Σ_j exp(2πi·jm/d) |j><j|`.
pub fn correction_unitary(m: usize, d: usize) -> Result<Operator> {
    check_value("outcome", m, d)?;
    Ok(phase_diagonal(d, m))
}

/// Permutation unitary `|k, a_1, …, a_n> ↦ |k, a_1 ⊕ k, …, a_n ⊕ k>` on
/// `1 + n_copies` qudits, so `|k>|0…0> ↦ |k>^{⊗(n+1)}`.
pub fn clone_extend_unitary(d: usize, n_copies: usize) -> Result<Operator> {
    if d == 0 || n_copies == 0 {
        return Err(Error::InvalidParameter(format!(
            "need d ≥ 1 and at least one copy, got d={d}, n={n_copies}"
        )));
    }
    let dim = checked_pow(d, n_copies + 1).unwrap_or(usize::MAX);
    policy().guard(dim)?;
    let anc = dim / d;
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..d {
        for a in 0..anc {
            // shift every ancilla digit by k
            let mut rest = a;
            let mut out = 0;
            let mut place = 1;
            for _ in 0..n_copies {
                out += ((rest % d + k) % d) * place;
                rest /= d;
                place *= d;
            }
            u[(k * anc + out, k * anc + a)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(Operator::from_matrix(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{states, Ket, Tensor};

    #[test]
    fn phase_encoding_examples() {
        for d in 2..=4 {
            assert!(phase_encoding_unitary(0, d).unwrap().frobenius_distance(&Operator::identity(d)) < 1e-15);
        }
        let z = Operator::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert!(phase_encoding_unitary(1, 2).unwrap().frobenius_distance(&z) < 1e-15);
        for x in 0..3 {
            let u = phase_encoding_unitary(x, 3).unwrap().tensor(&Operator::identity(3));
            let out = u.apply(&states::phi_plus(3));
            assert!(out.overlap_sq(&states::phi_x(3, x).unwrap()) > 1.0 - 1e-14);
        }
        assert!(matches!(phase_encoding_unitary(3, 3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn correction_examples() {
        assert!(correction_unitary(0, 3).unwrap().frobenius_distance(&Operator::identity(3)) < 1e-15);
        let z = Operator::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert!(correction_unitary(1, 2).unwrap().frobenius_distance(&z) < 1e-15);
        assert!(correction_unitary(2, 2).is_err());
    }

    #[test]
    fn clone_extend_examples() {
        let cnot = clone_extend_unitary(2, 1).unwrap();
        assert!(cnot.unitarity_defect() < 1e-15);
        for k in 0..2 {
            let out = cnot.apply(&Ket::basis(4, 2 * k).unwrap());
            assert!(out.overlap_sq(&Ket::basis(4, 3 * k).unwrap()) > 1.0 - 1e-15);
        }
        let u = clone_extend_unitary(3, 2).unwrap();
        assert!(u.unitarity_defect() < 1e-14);
        let out = u.apply(&Ket::basis(27, 18).unwrap());
        assert!(out.overlap_sq(&Ket::basis(27, 26).unwrap()) > 1.0 - 1e-15);
        // |Φ+>_{AC} with |0>_{A'}, factor order (A, A', C)
        let d = 3;
        let mut amps = vec![Complex64::new(0.0, 0.0); d * d * d];
        for j in 0..d {
            amps[j * d * d + j] = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        }
        let u1 = clone_extend_unitary(d, 1).unwrap();
        let out = u1.tensor(&Operator::identity(d)).apply(&Ket::unnormalized(amps));
        assert!(out.overlap_sq(&states::ghz(3, 3).unwrap()) > 1.0 - 1e-14);
    }
}
