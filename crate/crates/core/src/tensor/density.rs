use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ket::Ket;
use super::layout::SubsystemLayout;
use super::spectral::{hermitian_eigen, hermitian_eigenvalues, hermitian_part, hermiticity_defect};
use super::Tensor;
use crate::error::{Error, Result};
use crate::numeric::policy;

/// Hermitian, unit-trace, positive semidefinite matrix annotated with its
/// tensor-factor layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
    layout: SubsystemLayout,
}

impl DensityMatrix {
    /// Checked constructor. Hermiticity and trace are checked at the
    /// structural tolerance, positivity at the spectral one.
    pub fn new(m: DMatrix<Complex64>, layout: SubsystemLayout) -> Result<Self> {
        let rho = Self::from_parts(m, layout)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Shape checks only.
    pub(crate) fn from_parts(m: DMatrix<Complex64>, layout: SubsystemLayout) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidState(format!(
                "not square: {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: m.nrows(),
            });
        }
        Ok(Self { m, layout })
    }

    /// Hermitian part rescaled to unit trace; used after channel and
    /// measurement steps to strip rounding drift.
    pub(crate) fn renormalized(m: DMatrix<Complex64>, layout: SubsystemLayout) -> Result<Self> {
        let h = hermitian_part(&m);
        let tr = h.trace().re;
        if tr <= 0.0 {
            return Err(Error::InvalidState(format!("non-positive trace {tr}")));
        }
        Self::from_parts(h.unscale(tr), layout)
    }

    pub fn validate(&self) -> Result<()> {
        let p = policy();
        let herm = hermiticity_defect(&self.m);
        if herm > p.structural_tol {
            return Err(Error::InvalidState(format!("hermiticity defect {herm:.3e}")));
        }
        let tr = self.m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > p.structural_tol {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -p.spectral_tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn from_ket(k: &Ket, layout: SubsystemLayout) -> Result<Self> {
        let n = k.norm();
        if (n - 1.0).abs() > policy().structural_tol {
            return Err(Error::NotNormalized(n));
        }
        Self::from_parts(k.projector().into_matrix(), layout)
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let n = layout.total_dim();
        Self {
            m: DMatrix::identity(n, n).unscale(n as f64),
            layout,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with_pure(&self, psi: &Ket) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        let v = psi.amplitudes();
        Ok((v.adjoint() * &self.m * v)[(0, 0)].re)
    }

    /// Dominant eigenvector when the state is pure within `tol` (purity ≥ 1 − tol).
    /// The global phase is fixed so that the largest-magnitude amplitude is real positive.
    pub fn as_pure(&self, tol: f64) -> Option<Ket> {
        if self.purity() < 1.0 - tol {
            return None;
        }
        let (_, vecs) = hermitian_eigen(&self.m);
        let col = vecs.column(0).into_owned();
        let (imax, _) = col
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        let phase = col[imax] / col[imax].norm();
        Some(Ket::from_vector(col / phase))
    }

    pub fn with_layout(&self, layout: SubsystemLayout) -> Result<Self> {
        Self::from_parts(self.m.clone(), layout)
    }

    pub fn relabel(&self, from: &super::Label, to: super::Label) -> Result<Self> {
        Ok(Self {
            m: self.m.clone(),
            layout: self.layout.relabel(from, to)?,
        })
    }

    /// `self ⊗ other`; layouts are concatenated and must not share labels.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        Ok(Self {
            m: self.m.kronecker(&other.m),
            layout: self.layout.concat(&other.layout)?,
        })
    }

    /// Max entry-wise distance, ignoring layouts.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.m - &other.m)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl Tensor for DMatrix<Complex64> {
    fn tensor(&self, other: &Self) -> Self {
        self.kronecker(other)
    }
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    layout: SubsystemLayout,
    /// Row-major entries as `[re, im]` pairs.
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let entries = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let z = self.m[(r, c)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        DensityRepr {
            layout: self.layout.clone(),
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DensityRepr::deserialize(d)?;
        let n = r.entries.len();
        if r.entries.iter().any(|row| row.len() != n) {
            return Err(serde::de::Error::custom("entries must form a square matrix"));
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = r.entries[i][j];
            Complex64::new(re, im)
        });
        DensityMatrix::new(m, r.layout).map_err(serde::de::Error::custom)
    }
}
