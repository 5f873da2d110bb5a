use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::erasing_channel;
use crate::error::{Error, Result};
use crate::numeric::policy;
use crate::tensor::spectral::hermitian_eigen;
use crate::tensor::{partial_trace, states, trace_distance, DensityMatrix, Ket, Label, SubsystemLayout, Tensor};

/// Outcome of sending target and control through the erasing channels in one
/// fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub d: usize,
    /// Bob's success with the square-root measurement on what he receives.
    pub bob_success: f64,
    /// `(d − 1 + t_min)/d`, an upper bound on any decoder's success.
    pub bound: f64,
    pub min_pairwise_trace_distance: f64,
    pub max_pairwise_trace_distance: f64,
    pub charlie_marginals: Vec<DensityMatrix>,
    /// Every pair of Charlie marginals is perfectly distinguishable.
    pub leak_certified: bool,
    /// Perfect decoding implies a certified leak.
    pub implication_holds: bool,
}

fn tc_layout(d: usize) -> SubsystemLayout {
    SubsystemLayout::from_pairs([(Label::A, d), (Label::C, d)]).expect("d ≥ 1")
}

/// Success of the square-root measurement `M_x = S^{-1/2} ρ_x S^{-1/2}`,
/// `S = Σ_x ρ_x`, for equiprobable states.
pub fn pretty_good_success(states: &[DensityMatrix]) -> Result<f64> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidParameter("no states to discriminate".into()))?;
    let dim = first.dim();
    let mut s = first.matrix().clone();
    for r in &states[1..] {
        if r.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.dim(),
            });
        }
        s += r.matrix();
    }
    let (vals, vecs) = hermitian_eigen(&s);
    let cut = policy().spectral_tol;
    let inv_sqrt: Vec<Complex64> = vals
        .iter()
        .map(|&v| Complex64::new(if v > cut { 1.0 / v.sqrt() } else { 0.0 }, 0.0))
        .collect();
    let s_inv = &vecs * nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(inv_sqrt)) * vecs.adjoint();
    let total: f64 = states
        .iter()
        .map(|r| {
            let m = &s_inv * r.matrix() * &s_inv;
            (m * r.matrix()).trace().re
        })
        .sum();
    Ok((total / states.len() as f64).clamp(0.0, 1.0))
}

/// Runs the fixed-order pipeline on joint target–control encodings `ρ_TC(x)`.
/// The target passes through `E_0`, then `E_1`, …, then `E_{d−1}`; Bob then
/// receives target and control and decodes with the square-root measurement.
pub fn fixed_configuration_baseline(d: usize, encodings: &[DensityMatrix]) -> Result<BaselineReport> {
    if encodings.len() != d || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "need one encoding per message for d ≥ 2, got {} for d = {d}",
            encodings.len()
        )));
    }
    let mut received = Vec::with_capacity(d);
    let mut marginals = Vec::with_capacity(d);
    for enc in encodings {
        if enc.layout().dims() != [d, d] {
            return Err(Error::InvalidLayout(format!(
                "encoding must be target ⊗ control of dimension {d} each, got {}",
                enc.layout()
            )));
        }
        let mut rho = enc.with_layout(tc_layout(d))?;
        for l in 0..d {
            rho = erasing_channel(d, l)?.apply(&rho, &[Label::A])?;
        }
        marginals.push(partial_trace(&rho, &[Label::C])?);
        received.push(rho);
    }
    let mut t_min = f64::INFINITY;
    let mut t_max: f64 = 0.0;
    for i in 0..d {
        for j in i + 1..d {
            let t = trace_distance(&marginals[i], &marginals[j])?;
            t_min = t_min.min(t);
            t_max = t_max.max(t);
        }
    }
    let bob_success = pretty_good_success(&received)?;
    let tol = policy().spectral_tol;
    let leak_certified = t_min >= 1.0 - tol;
    Ok(BaselineReport {
        d,
        bob_success,
        bound: (d as f64 - 1.0 + t_min) / d as f64,
        min_pairwise_trace_distance: t_min,
        max_pairwise_trace_distance: t_max,
        charlie_marginals: marginals,
        leak_certified,
        implication_holds: bob_success < 1.0 - tol || leak_certified,
    })
}

/// `|Φ_x>` for every `x`: the encodings of the controlled-order protocol.
pub fn dfs_phase_encodings(d: usize) -> Result<Vec<DensityMatrix>> {
    (0..d)
        .map(|x| DensityMatrix::from_ket(&states::phi_x(d, x)?, tc_layout(d)))
        .collect()
}

/// `|x>|x>`: the message written into the control as a classical flag.
pub fn classical_flag_encodings(d: usize) -> Result<Vec<DensityMatrix>> {
    (0..d)
        .map(|x| {
            let k = Ket::basis(d, x)?;
            DensityMatrix::from_ket(&k.tensor(&k), tc_layout(d))
        })
        .collect()
}

/// `|Φ+>` for every `x`: no information anywhere.
pub fn identical_encodings(d: usize) -> Result<Vec<DensityMatrix>> {
    let rho = DensityMatrix::from_ket(&states::phi_plus(d), tc_layout(d))?;
    Ok(vec![rho; d])
}
