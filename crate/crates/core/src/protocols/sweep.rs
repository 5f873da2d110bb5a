use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::distribution::{run_bipartite_establishment, run_ghz_distribution};
use super::private_dit::run_private_dit;
use super::resource::ResourceState;
use super::transcript::Protocol;
use crate::error::{Error, Result};
use crate::metrics::concurrence_2qubit;

/// A metric counts as perfect when within this distance of 1.
pub const PERFECT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub spectrum: Vec<f64>,
    pub metric: f64,
    /// `1 − max_j λ_j`, which is `(d−1)/d` exactly at the uniform spectrum.
    pub resource_entanglement: f64,
    pub resource_concurrence: Option<f64>,
    pub is_perfect: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub protocol: Protocol,
    pub d: usize,
    pub n_lines: usize,
    pub rows: Vec<SweepRow>,
    /// The metric never decreases as resource entanglement grows.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCertificate {
    pub perfect_rows: Vec<usize>,
    pub uniform_rows: Vec<usize>,
    /// Perfect rows are exactly the uniform-spectrum rows.
    pub holds: bool,
}

impl SweepTable {
    /// Checks that the metric is perfect at and only at the uniform spectrum.
    pub fn certify(&self, tol: f64) -> SweepCertificate {
        let uniform = 1.0 / self.d as f64;
        let perfect_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&i| (self.rows[i].metric - 1.0).abs() <= tol)
            .collect();
        let uniform_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.rows[i].spectrum.iter().all(|l| (l - uniform).abs() <= tol))
            .collect();
        SweepCertificate {
            holds: perfect_rows == uniform_rows,
            perfect_rows,
            uniform_rows,
        }
    }
}

/// Spectra `(α, 1−α)` for `d = 2`, and `(α, (1−α)/(d−1), …)` otherwise, for
/// `points` values of `α` evenly spaced from `start` to `end`.
pub fn alpha_grid(d: usize, start: f64, end: f64, points: usize) -> Result<Vec<Vec<f64>>> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d ≥ 2, got {d}")));
    }
    if points == 0 || !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) {
        return Err(Error::InvalidParameter(format!(
            "grid needs points ≥ 1 and endpoints in [0, 1], got {start}:{end}:{points}"
        )));
    }
    if points == 1 && start != end {
        return Err(Error::InvalidParameter("a one-point grid needs start = end".into()));
    }
    Ok((0..points)
        .map(|i| {
            let a = if points == 1 {
                start
            } else {
                start + (end - start) * i as f64 / (points - 1) as f64
            };
            let rest = (1.0 - a) / (d - 1) as f64;
            let mut s = vec![rest; d];
            s[0] = a;
            s
        })
        .collect())
}

/// Sweep metric for one resource: mean success over all messages for the
/// private dit, probability-weighted mean fidelity otherwise.
pub fn sweep_metric(protocol: Protocol, d: usize, n_lines: usize, resource: &ResourceState) -> Result<f64> {
    match protocol {
        Protocol::PrivateDit => {
            let mut total = 0.0;
            for x in 0..d {
                total += run_private_dit(d, x, resource)?
                    .metric("success_probability")
                    .expect("always recorded");
            }
            Ok(total / d as f64)
        }
        Protocol::Bipartite => Ok(run_bipartite_establishment(d, resource)?
            .metric("mean_fidelity")
            .expect("always recorded")),
        Protocol::Ghz => Ok(run_ghz_distribution(d, n_lines, resource)?
            .metric("mean_fidelity")
            .expect("always recorded")),
        Protocol::FixedBaseline => Err(Error::InvalidParameter(
            "the fixed baseline takes encodings, not a resource sweep".into(),
        )),
    }
}

/// Evaluates `protocol` over Schmidt spectra in parallel; rows keep grid order.
pub fn necessity_sweep(protocol: Protocol, d: usize, n_lines: usize, grid: &[Vec<f64>]) -> Result<SweepTable> {
    if grid.iter().any(|s| s.len() != d) {
        return Err(Error::InvalidSpectrum(format!("every spectrum must have {d} entries")));
    }
    let resources: Vec<ResourceState> = grid.iter().map(|s| ResourceState::schmidt(s)).collect::<Result<_>>()?;
    let rows: Vec<SweepRow> = resources
        .par_iter()
        .map(|r| {
            let metric = sweep_metric(protocol, d, n_lines, r)?;
            let spectrum = r.spectrum().expect("schmidt resource");
            let top = spectrum.iter().copied().fold(0.0, f64::max);
            let resource_concurrence = if d == 2 {
                Some(concurrence_2qubit(&r.density()?)?)
            } else {
                None
            };
            Ok(SweepRow {
                is_perfect: (metric - 1.0).abs() <= PERFECT_TOL,
                spectrum,
                metric,
                resource_entanglement: 1.0 - top,
                resource_concurrence,
            })
        })
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].resource_entanglement.total_cmp(&rows[b].resource_entanglement));
    let monotone = order
        .windows(2)
        .all(|w| rows[w[1]].metric >= rows[w[0]].metric - PERFECT_TOL);
    Ok(SweepTable {
        protocol,
        d,
        n_lines,
        rows,
        monotone,
    })
}
