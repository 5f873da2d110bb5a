//! Process-wide numeric policy.
//!
//! Every tolerance used by the library is read from a single record. Callers
//! that need different thresholds (the CLI's `--tol` and `--max-dim`) replace
//! it with [`set_policy`] before running anything.

use std::sync::RwLock;

use serde::{Deserialize, Serialize};

/// Tolerances and resource limits shared by all modules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericPolicy {
    /// Structural invariants: normalization, hermiticity, trace.
    pub structural_tol: f64,
    /// Spectral computations: eigenvalues, Choi distances, fidelities.
    pub spectral_tol: f64,
    /// Max-abs entry below which a Kraus operator counts as zero.
    pub zero_threshold: f64,
    /// Measurement branches below this probability carry a null state.
    pub null_branch_threshold: f64,
    /// Largest total Hilbert-space dimension any construction may allocate.
    pub max_dim: usize,
}

impl NumericPolicy {
    pub const DEFAULT: NumericPolicy = NumericPolicy {
        structural_tol: 1e-12,
        spectral_tol: 1e-10,
        zero_threshold: 1e-14,
        null_branch_threshold: 1e-12,
        max_dim: 4096,
    };

    /// Fails with [`Error::ResourceGuard`](crate::Error::ResourceGuard) if `dim` exceeds `max_dim`.
    pub fn guard(&self, dim: usize) -> crate::Result<()> {
        if dim > self.max_dim {
            Err(crate::Error::ResourceGuard {
                dim,
                max: self.max_dim,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::DEFAULT
    }
}

static POLICY: RwLock<NumericPolicy> = RwLock::new(NumericPolicy::DEFAULT);

/// Current policy.
pub fn policy() -> NumericPolicy {
    *POLICY.read().unwrap_or_else(|e| e.into_inner())
}

/// Replace the global policy, returning the previous one.
pub fn set_policy(p: NumericPolicy) -> NumericPolicy {
    let mut guard = POLICY.write().unwrap_or_else(|e| e.into_inner());
    std::mem::replace(&mut *guard, p)
}

/// `base^exp`, or `None` on overflow.
pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
