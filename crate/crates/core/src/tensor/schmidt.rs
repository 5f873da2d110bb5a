use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ket::Ket;
use super::layout::{Label, SubsystemLayout};
use super::spectral::{singular_values, svd};
use super::subsystem::{front_permutation, permute_vector};
use crate::error::{Error, Result};
use crate::numeric::policy;

/// `psi = Σ_k coefficients[k] · left[k] ⊗ right[k]`, coefficients descending.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub left: Vec<Ket>,
    pub right: Vec<Ket>,
    pub left_labels: Vec<Label>,
    pub right_labels: Vec<Label>,
}

impl Schmidt {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuilds the state in the factor order left ⊗ right.
    pub fn reconstruct(&self) -> Ket {
        let dl = self.left.first().map_or(0, |k| k.dim());
        let dr = self.right.first().map_or(0, |k| k.dim());
        let mut v = nalgebra::DVector::<Complex64>::zeros(dl * dr);
        for ((c, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            v += l.amplitudes().kronecker(r.amplitudes()) * Complex64::new(*c, 0.0);
        }
        Ket::from_vector(v)
    }
}

/// Coefficient matrix of `psi` across the cut `left | rest`, with both
/// sides in their original relative factor order.
pub(crate) fn cut_matrix(
    psi: &Ket,
    layout: &SubsystemLayout,
    left: &[Label],
) -> Result<(DMatrix<Complex64>, Vec<usize>, Vec<usize>)> {
    if psi.dim() != layout.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_dim(),
            found: psi.dim(),
        });
    }
    let mut lpos = layout.positions(left)?;
    lpos.sort_unstable();
    if lpos.is_empty() || lpos.len() == layout.len() {
        return Err(Error::EmptyCut);
    }
    let perm = front_permutation(layout.len(), &lpos);
    let v = permute_vector(psi.amplitudes(), layout.dims(), &perm);
    let dl: usize = lpos.iter().map(|&p| layout.dims()[p]).product();
    let dr = layout.total_dim() / dl;
    let m = DMatrix::from_fn(dl, dr, |a, b| v[a * dr + b]);
    let rpos = perm[lpos.len()..].to_vec();
    Ok((m, lpos, rpos))
}

/// All `min(d_left, d_right)` singular values of the cut, descending.
pub fn schmidt_spectrum(psi: &Ket, layout: &SubsystemLayout, left: &[Label]) -> Result<Vec<f64>> {
    let (m, _, _) = cut_matrix(psi, layout, left)?;
    Ok(singular_values(&m))
}

/// Schmidt decomposition across `left | rest`. Coefficients at or below
/// the structural tolerance are dropped.
pub fn schmidt_decomposition(psi: &Ket, layout: &SubsystemLayout, left: &[Label]) -> Result<Schmidt> {
    let n = psi.norm();
    if (n - 1.0).abs() > policy().structural_tol {
        return Err(Error::NotNormalized(n));
    }
    let (m, lpos, rpos) = cut_matrix(psi, layout, left)?;
    let (u, sv, v_t) = svd(&m);
    let tol = policy().structural_tol;
    let mut out = Schmidt {
        coefficients: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
        left_labels: lpos.iter().map(|&p| layout.labels()[p].clone()).collect(),
        right_labels: rpos.iter().map(|&p| layout.labels()[p].clone()).collect(),
    };
    for (k, &s) in sv.iter().enumerate() {
        if s <= tol {
            continue;
        }
        out.coefficients.push(s);
        out.left.push(Ket::from_vector(u.column(k).into_owned()));
        out.right.push(Ket::from_vector(v_t.row(k).transpose()));
    }
    Ok(out)
}
