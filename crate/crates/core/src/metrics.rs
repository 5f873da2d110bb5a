//! Entanglement and distinguishability measures.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::policy;
use crate::tensor::spectral::{hermitian_eigen, singular_values, trace_norm_hermitian};
use crate::tensor::{schmidt_spectrum, DensityMatrix, Ket, Label, SubsystemLayout};

/// Largest number of parties accepted by [`ggm`].
pub const MAX_GGM_PARTIES: usize = 16;

/// Two-qubit concurrence `max(0, λ1 − λ2 − λ3 − λ4)`, with `λ` the
/// descending singular values of `Wᵀ (σy⊗σy) W` for `ρ = W W†`. These are
/// the square roots of the eigenvalues of `ρ ρ̃`.
pub fn concurrence_2qubit(rho: &DensityMatrix) -> Result<f64> {
    if rho.layout().dims() != [2, 2] {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::i();
    let sy = DMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]);
    let yy = sy.kronecker(&sy);
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let cut = policy().zero_threshold;
    let kept: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > cut).collect();
    let w = DMatrix::from_fn(4, kept.len(), |r, c| vecs[(r, kept[c])] * vals[kept[c]].sqrt());
    let tau = w.transpose() * yy * &w;
    let mut lam = singular_values(&tau);
    lam.resize(4, 0.0);
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).clamp(0.0, 1.0))
}

/// Largest squared Schmidt coefficient across one cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartitionReport {
    pub left: Vec<Label>,
    pub right: Vec<Label>,
    pub top_schmidt_sq: f64,
}

/// Top squared Schmidt coefficient for every cut `left | right`, where
/// `left` contains the first factor (each unordered cut appears once).
pub fn ggm_report(psi: &Ket, layout: &SubsystemLayout) -> Result<Vec<BipartitionReport>> {
    let n = layout.len();
    if n < 2 {
        return Err(Error::InvalidLayout("GGM needs at least two subsystems".into()));
    }
    if n > MAX_GGM_PARTIES {
        return Err(Error::ResourceGuard {
            dim: n,
            max: MAX_GGM_PARTIES,
        });
    }
    let labels = layout.labels();
    let mut out = Vec::with_capacity((1 << (n - 1)) - 1);
    for mask in 0..(1usize << (n - 1)) - 1 {
        // bit k set means factor k+1 joins the left side
        let mut left = vec![labels[0].clone()];
        let mut right = Vec::new();
        for (k, l) in labels.iter().enumerate().skip(1) {
            if mask >> (k - 1) & 1 == 1 {
                left.push(l.clone());
            } else {
                right.push(l.clone());
            }
        }
        let s = schmidt_spectrum(psi, layout, &left)?;
        out.push(BipartitionReport {
            left,
            right,
            top_schmidt_sq: s[0] * s[0],
        });
    }
    Ok(out)
}

/// Generalized geometric measure `1 − max_cut λ_cut` of a pure state.
pub fn ggm(psi: &Ket, layout: &SubsystemLayout) -> Result<f64> {
    let n = psi.norm();
    if (n - 1.0).abs() > policy().structural_tol {
        return Err(Error::NotNormalized(n));
    }
    let top = ggm_report(psi, layout)?
        .iter()
        .map(|r| r.top_schmidt_sq)
        .fold(0.0, f64::max);
    Ok((1.0 - top).max(0.0))
}

/// Whether every one of the `m = min(d_left, d_right)` Schmidt coefficients
/// equals `1/√m` within `tol`.
pub fn is_maximally_entangled(psi: &Ket, layout: &SubsystemLayout, left: &[Label], tol: f64) -> Result<bool> {
    let s = schmidt_spectrum(psi, layout, left)?;
    let target = 1.0 / (s.len() as f64).sqrt();
    Ok(s.iter().all(|c| (c - target).abs() <= tol))
}

/// Minimal error of discriminating `rho0` (prior `p0`) from `rho1`:
/// `(1 − ‖p0 ρ0 − (1−p0) ρ1‖₁)/2`.
pub fn helstrom_error(rho0: &DensityMatrix, rho1: &DensityMatrix, p0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::InvalidParameter(format!("prior {p0} outside [0, 1]")));
    }
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim(),
            found: rho1.dim(),
        });
    }
    let diff = rho0.matrix() * Complex64::new(p0, 0.0) - rho1.matrix() * Complex64::new(1.0 - p0, 0.0);
    let e = (1.0 - trace_norm_hermitian(&diff)) / 2.0;
    Ok(e.clamp(0.0, p0.min(1.0 - p0)))
}

/// Checks that `pmf` is a rectangular table of nonnegative entries summing to 1.
pub fn validate_pmf(pmf: &[Vec<f64>]) -> Result<()> {
    let cols = pmf.first().map_or(0, Vec::len);
    if cols == 0 || pmf.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidPmf("table must be non-empty and rectangular".into()));
    }
    if let Some(p) = pmf.iter().flatten().find(|p| p.is_nan() || **p < 0.0) {
        return Err(Error::InvalidPmf(format!("negative or NaN entry {p}")));
    }
    let total: f64 = pmf.iter().flatten().sum();
    if (total - 1.0).abs() > policy().spectral_tol {
        return Err(Error::InvalidPmf(format!("entries sum to {total}")));
    }
    Ok(())
}

/// Shannon entropy in bits, `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Mutual information in bits between the row and column variables.
pub fn mutual_information(pmf: &[Vec<f64>]) -> Result<f64> {
    validate_pmf(pmf)?;
    let rows: Vec<f64> = pmf.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..pmf[0].len()).map(|c| pmf.iter().map(|r| r[c]).sum()).collect();
    let mut mi = 0.0;
    for (i, r) in pmf.iter().enumerate() {
        for (j, &p) in r.iter().enumerate() {
            if p > 0.0 {
                mi += p * (p / (rows[i] * cols[j])).log2();
            }
        }
    }
    Ok(mi.max(0.0))
}
