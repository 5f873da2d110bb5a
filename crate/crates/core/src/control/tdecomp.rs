//! Canonical form of a controlled choice of erasing channels.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{canonicalize_extension, ExtendedChannel, KrausChannel};
use crate::error::{Error, Result};
use crate::numeric::policy;
use crate::tensor::spectral::hermitian_eigen;
use crate::tensor::{DensityMatrix, Ket, Label, Operator};

/// `channel(ρ) = T₀ ρ T₀† + Σ_j Tr[((I − |v_j><v_j|) ⊗ |j><j|) ρ] |jj><jj|`
/// with `T₀ = Σ_j |j><v_j| ⊗ |j><j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TDecomposition {
    pub t0: Operator,
    pub v: Vec<Ket>,
    pub remainder_weights: Vec<Operator>,
}

impl TDecomposition {
    pub fn d(&self) -> usize {
        self.v.len()
    }

    /// Rebuilds the channel from `T₀` and the remainder weights.
    pub fn to_channel(&self) -> Result<KrausChannel> {
        let d = self.d();
        let mut kraus = vec![self.t0.clone()];
        let cut = policy().zero_threshold;
        for (j, r) in self.remainder_weights.iter().enumerate() {
            let (vals, vecs) = hermitian_eigen(r.matrix());
            for (k, &lam) in vals.iter().enumerate() {
                if lam <= cut {
                    continue;
                }
                let w = vecs.column(k);
                let mut m = DMatrix::<Complex64>::zeros(d * d, d * d);
                let row = j * d + j;
                for l in 0..d {
                    m[(row, l * d + j)] = w[l].conj() * lam.sqrt();
                }
                kraus.push(Operator::from_matrix(m));
            }
        }
        KrausChannel::new(kraus)
    }

    pub fn apply(&self, rho: &DensityMatrix, acting_on: &[Label]) -> Result<DensityMatrix> {
        self.to_channel()?.apply(rho, acting_on)
    }
}

/// Decomposes the controlled choice of `channels`, where branch `j` must
/// erase into `|j>`. Each branch is first brought to the Kraus form whose
/// amplitude vector is `(1, 0, …, 0)`.
pub fn t_decomposition(channels: &[ExtendedChannel]) -> Result<TDecomposition> {
    let d = channels.len();
    if d == 0 {
        return Err(Error::InvalidParameter("no branch channels".into()));
    }
    let tol = policy().spectral_tol;
    let mut t0 = DMatrix::<Complex64>::zeros(d * d, d * d);
    let mut v = Vec::with_capacity(d);
    let mut remainder_weights = Vec::with_capacity(d);
    for (j, ch) in channels.iter().enumerate() {
        if ch.target_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: ch.target_dim(),
            });
        }
        let canon = canonicalize_extension(ch)?;
        for k in canon.base().kraus() {
            let leak = (0..d)
                .filter(|&r| r != j)
                .flat_map(|r| (0..d).map(move |c| (r, c)))
                .map(|(r, c)| k.matrix()[(r, c)].norm())
                .fold(0.0, f64::max);
            if leak > tol {
                return Err(Error::InvalidChannel(format!(
                    "branch {j} does not erase into |{j}> (leak {leak:.3e})"
                )));
            }
        }
        let e0 = canon.base().kraus()[0].matrix();
        let vj: Vec<Complex64> = (0..d).map(|l| e0[(j, l)].conj()).collect();
        for l in 0..d {
            t0[(j * d + j, l * d + j)] = vj[l].conj();
        }
        let vk = Ket::unnormalized(vj);
        let r = Operator::identity(d).matrix() - vk.projector().matrix();
        remainder_weights.push(Operator::from_matrix(r));
        v.push(vk);
    }
    Ok(TDecomposition {
        t0: Operator::from_matrix(t0),
        v,
        remainder_weights,
    })
}
