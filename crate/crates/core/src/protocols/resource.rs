use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::policy;
use crate::tensor::{states, DensityMatrix, Label, SubsystemLayout};

/// How the shared Alice–Charlie state is specified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResourceKind {
    MaximallyEntangled,
    SchmidtSpectrum { spectrum: Vec<f64> },
    Explicit { state: DensityMatrix },
}

/// State `ρ*_{AC}` shared by Alice and Charlie before the protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceState {
    pub d: usize,
    pub kind: ResourceKind,
}

impl ResourceState {
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(format!("need d ≥ 2, got {d}")));
        }
        Ok(Self {
            d,
            kind: ResourceKind::MaximallyEntangled,
        })
    }

    /// `Σ_j √λ_j |jj>`; entries must be nonnegative and sum to 1 within 1e-12.
    pub fn schmidt(spectrum: &[f64]) -> Result<Self> {
        let d = spectrum.len();
        if d < 2 {
            return Err(Error::InvalidSpectrum(format!("need at least two coefficients, got {d}")));
        }
        if let Some(l) = spectrum.iter().find(|l| l.is_nan() || **l < 0.0) {
            return Err(Error::InvalidSpectrum(format!("negative or NaN coefficient {l}")));
        }
        let total: f64 = spectrum.iter().sum();
        if (total - 1.0).abs() > policy().structural_tol {
            return Err(Error::InvalidSpectrum(format!("coefficients sum to {total}")));
        }
        Ok(Self {
            d,
            kind: ResourceKind::SchmidtSpectrum {
                spectrum: spectrum.to_vec(),
            },
        })
    }

    /// Any two-factor state with both factors of dimension `d`; the factors
    /// are relabeled `A` and `C` in order.
    pub fn explicit(rho: DensityMatrix) -> Result<Self> {
        let dims = rho.layout().dims().to_vec();
        if dims.len() != 2 || dims[0] != dims[1] || dims[0] < 2 {
            return Err(Error::InvalidLayout(format!(
                "resource must be two factors of equal dimension ≥ 2, got {dims:?}"
            )));
        }
        let layout = SubsystemLayout::from_pairs([(Label::A, dims[0]), (Label::C, dims[1])])?;
        Ok(Self {
            d: dims[0],
            kind: ResourceKind::Explicit {
                state: rho.with_layout(layout)?,
            },
        })
    }

    pub fn layout(&self) -> SubsystemLayout {
        SubsystemLayout::from_pairs([(Label::A, self.d), (Label::C, self.d)]).expect("d ≥ 2")
    }

    /// The state on `A ⊗ C`.
    pub fn density(&self) -> Result<DensityMatrix> {
        match &self.kind {
            ResourceKind::MaximallyEntangled => DensityMatrix::from_ket(&states::phi_plus(self.d), self.layout()),
            ResourceKind::SchmidtSpectrum { spectrum } => {
                DensityMatrix::from_ket(&states::schmidt_form(spectrum), self.layout())
            }
            ResourceKind::Explicit { state } => Ok(state.clone()),
        }
    }

    /// Schmidt coefficients squared, when known without diagonalization.
    pub fn spectrum(&self) -> Option<Vec<f64>> {
        match &self.kind {
            ResourceKind::MaximallyEntangled => Some(vec![1.0 / self.d as f64; self.d]),
            ResourceKind::SchmidtSpectrum { spectrum } => Some(spectrum.clone()),
            ResourceKind::Explicit { .. } => None,
        }
    }

    /// Short tag: `max`, `schmidt:λ0,λ1,…` or `explicit`.
    pub fn description(&self) -> String {
        match &self.kind {
            ResourceKind::MaximallyEntangled => "max".into(),
            ResourceKind::SchmidtSpectrum { spectrum } => format!(
                "schmidt:{}",
                spectrum.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
            ),
            ResourceKind::Explicit { .. } => "explicit".into(),
        }
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if self.d != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.d,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_validation() {
        assert!(ResourceState::schmidt(&[0.25, 0.75]).is_ok());
        assert!(matches!(ResourceState::schmidt(&[0.3, 0.3]), Err(Error::InvalidSpectrum(_))));
        assert!(matches!(ResourceState::schmidt(&[-0.1, 1.1]), Err(Error::InvalidSpectrum(_))));
        assert!(ResourceState::schmidt(&[1.0]).is_err());
    }

    #[test]
    fn densities_and_descriptions() {
        let r = ResourceState::maximally_entangled(3).unwrap();
        let rho = r.density().unwrap();
        assert!((rho.fidelity_with_pure(&states::phi_plus(3)).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(r.description(), "max");
        let s = ResourceState::schmidt(&[0.25, 0.75]).unwrap();
        assert_eq!(s.description(), "schmidt:0.25,0.75");
        let e = ResourceState::explicit(s.density().unwrap()).unwrap();
        assert_eq!(e.density().unwrap(), s.density().unwrap());
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<ResourceState>(&json).unwrap(), s);
    }
}
