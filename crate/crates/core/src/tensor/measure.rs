use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::density::DensityMatrix;
use super::ket::Ket;
use super::layout::Label;
use super::subsystem::{front_permutation, permute_matrix};
use crate::error::{Error, Result};
use crate::numeric::policy;

/// One outcome of a projective measurement.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementBranch {
    pub outcome: usize,
    pub probability: f64,
    /// Post-measurement state of the unmeasured factors; `None` marks a
    /// branch whose probability is below the null-branch threshold.
    pub state: Option<DensityMatrix>,
}

impl MeasurementBranch {
    pub fn is_null(&self) -> bool {
        self.state.is_none()
    }
}

/// Largest deviation of the Gram matrix of `basis` from the identity.
pub fn orthonormality_defect(basis: &[Ket]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((u.inner(v) - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Exact branch enumeration of a complete projective measurement of the
/// factor `subsystem` in `basis`. Every outcome is returned, including
/// null ones. When `subsystem` is the only factor the post-states are
/// omitted as well (nothing remains).
pub fn projective_measure(
    rho: &DensityMatrix,
    basis: &[Ket],
    subsystem: &Label,
) -> Result<Vec<MeasurementBranch>> {
    let p = policy();
    let layout = rho.layout();
    let pos = layout.position(subsystem)?;
    let d = layout.dims()[pos];
    if basis.len() != d || basis.iter().any(|k| k.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: basis.len(),
        });
    }
    let defect = orthonormality_defect(basis);
    if defect > p.spectral_tol {
        return Err(Error::NonOrthonormalBasis { max_overlap: defect });
    }
    let perm = front_permutation(layout.len(), &[pos]);
    let m = permute_matrix(rho.matrix(), layout.dims(), &perm);
    let rest = layout.total_dim() / d;
    let rest_layout = if layout.len() > 1 {
        Some(layout.select(&perm[1..]))
    } else {
        None
    };

    let mut branches = Vec::with_capacity(d);
    for (outcome, f) in basis.iter().enumerate() {
        // <f|_S rho |f>_S on the remaining factors
        let fv = f.amplitudes();
        let mut post = DMatrix::<Complex64>::zeros(rest, rest);
        for a in 0..d {
            let ca = fv[a].conj();
            if ca.norm() == 0.0 {
                continue;
            }
            for b in 0..d {
                let c = ca * fv[b];
                if c.norm() == 0.0 {
                    continue;
                }
                post += m.view((a * rest, b * rest), (rest, rest)) * c;
            }
        }
        let probability = post.trace().re.max(0.0);
        let state = match &rest_layout {
            Some(l) if probability >= p.null_branch_threshold => {
                Some(DensityMatrix::renormalized(post, l.clone())?)
            }
            _ => None,
        };
        branches.push(MeasurementBranch {
            outcome,
            probability,
            state,
        });
    }
    Ok(branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{states, SubsystemLayout};

    fn ac(d: usize) -> SubsystemLayout {
        SubsystemLayout::from_pairs([(Label::A, d), (Label::C, d)]).unwrap()
    }

    #[test]
    fn bell_fourier_measurement() {
        // direct projector arithmetic: <±|_C |Φ+> = |±>_A / √2
        let rho = DensityMatrix::from_ket(&states::phi_plus(2), ac(2)).unwrap();
        let br = projective_measure(&rho, &states::fourier_basis(2).unwrap(), &Label::C).unwrap();
        assert_eq!(br.len(), 2);
        for (b, m) in br.iter().zip(0..) {
            assert!((b.probability - 0.5).abs() < 1e-15);
            let expect = states::fourier_ket(2, m).unwrap();
            let f = b.state.as_ref().unwrap().fidelity_with_pure(&expect).unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenstate_gives_certain_outcome_and_null_branch() {
        let k = Ket::basis(4, 0).unwrap();
        let rho = DensityMatrix::from_ket(&k, ac(2)).unwrap();
        let br = projective_measure(&rho, &states::computational_basis(2), &Label::C).unwrap();
        assert!((br[0].probability - 1.0).abs() < 1e-15);
        assert!(br[1].is_null());
        assert_eq!(br[1].probability, 0.0);
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let rho = DensityMatrix::from_ket(&states::phi_plus(2), ac(2)).unwrap();
        let bad = vec![Ket::basis(2, 0).unwrap(), states::fourier_ket(2, 0).unwrap()];
        match projective_measure(&rho, &bad, &Label::C) {
            Err(Error::NonOrthonormalBasis { max_overlap }) => {
                assert!((max_overlap - 1.0 / 2f64.sqrt()).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ghz_fourier_on_c_gives_bell_pairs() {
        let l = SubsystemLayout::from_pairs([(Label::A, 2), (Label::B(1), 2), (Label::C, 2)]).unwrap();
        let rho = DensityMatrix::from_ket(&states::ghz(2, 3).unwrap(), l).unwrap();
        let br = projective_measure(&rho, &states::fourier_basis(2).unwrap(), &Label::C).unwrap();
        let h = 1.0 / 2f64.sqrt();
        let phi_minus = Ket::from_real(&[h, 0.0, 0.0, -h]).unwrap();
        for (b, target) in br.iter().zip([states::phi_plus(2), phi_minus]) {
            assert!((b.probability - 0.5).abs() < 1e-15);
            let f = b.state.as_ref().unwrap().fidelity_with_pure(&target).unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }
}
