//! Closed forms of the coincidence channel `K` and its `N`-line version.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::numeric::{checked_pow, policy};
use crate::tensor::subsystem::{front_permutation, inverse, permute_matrix};
use crate::tensor::{DensityMatrix, Label, Operator};

/// Largest number of complex entries a dense Kraus list built here may hold.
pub const KRAUS_ENTRY_CAP: usize = 1 << 26;

/// The coincidence channel on `N` target qudits plus one control qudit
/// (control last):
/// `ρ ↦ P0 ρ P0 + Σ_j Σ_{y≠j^N} <y,j|ρ|y,j> |j^N j><j^N j|`,
/// with `P0 = Σ_j |j^{N+1}><j^{N+1}|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoincidenceChannel {
    d: usize,
    n_lines: usize,
}

impl CoincidenceChannel {
    /// Fails when `d < 2`, `n_lines == 0` or `d^(N+1)` exceeds the policy's `max_dim`.
    pub fn new(d: usize, n_lines: usize) -> Result<Self> {
        Self::with_max_dim(d, n_lines, policy().max_dim)
    }

    pub fn with_max_dim(d: usize, n_lines: usize, max_dim: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(format!("need d ≥ 2, got {d}")));
        }
        if n_lines == 0 {
            return Err(Error::InvalidParameter("n_lines must be ≥ 1".into()));
        }
        let dim = checked_pow(d, n_lines + 1).unwrap_or(usize::MAX);
        if dim > max_dim {
            return Err(Error::ResourceGuard { dim, max: max_dim });
        }
        Ok(Self { d, n_lines })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_lines(&self) -> usize {
        self.n_lines
    }

    /// Dimension of `target^{⊗N} ⊗ control`.
    pub fn dim(&self) -> usize {
        self.d.pow(self.n_lines as u32 + 1)
    }

    /// Index of `|j>^{⊗(N+1)}`.
    fn diagonal_index(&self, j: usize) -> usize {
        j * (self.dim() - 1) / (self.d - 1)
    }

    /// Explicit Kraus set `{P0} ∪ {|j^N><y| ⊗ |j><j| : y ≠ j^N}`.
    pub fn kraus(&self) -> Result<KrausChannel> {
        let (d, dim) = (self.d, self.dim());
        let lines = dim / d;
        let count = 1 + d * (lines - 1);
        let entries = count.saturating_mul(dim * dim);
        if entries > KRAUS_ENTRY_CAP {
            return Err(Error::ResourceGuard {
                dim: entries,
                max: KRAUS_ENTRY_CAP,
            });
        }
        let one = Complex64::new(1.0, 0.0);
        let mut p0 = DMatrix::zeros(dim, dim);
        for j in 0..d {
            let s = self.diagonal_index(j);
            p0[(s, s)] = one;
        }
        let mut kraus = vec![Operator::from_matrix(p0)];
        for j in 0..d {
            let s = self.diagonal_index(j);
            let jn = s / d;
            for y in (0..lines).filter(|&y| y != jn) {
                let mut k = DMatrix::zeros(dim, dim);
                k[(s, y * d + j)] = one;
                kraus.push(Operator::from_matrix(k));
            }
        }
        KrausChannel::new(kraus)
    }

    /// Applies the channel to `targets` (in line order) and `control`, with
    /// identity on every other factor, without building Kraus operators.
    pub fn apply(&self, rho: &DensityMatrix, targets: &[Label], control: &Label) -> Result<DensityMatrix> {
        if targets.len() != self.n_lines {
            return Err(Error::DimensionMismatch {
                expected: self.n_lines,
                found: targets.len(),
            });
        }
        let layout = rho.layout();
        let mut acting = targets.to_vec();
        acting.push(control.clone());
        let pos = layout.positions(&acting)?;
        for &p in &pos {
            if layout.dims()[p] != self.d {
                return Err(Error::DimensionMismatch {
                    expected: self.d,
                    found: layout.dims()[p],
                });
            }
        }
        let perm = front_permutation(layout.len(), &pos);
        let m = permute_matrix(rho.matrix(), layout.dims(), &perm);
        let dim = self.dim();
        let rest = layout.total_dim() / dim;
        let mut out = DMatrix::<Complex64>::zeros(m.nrows(), m.ncols());
        let diag: Vec<usize> = (0..self.d).map(|j| self.diagonal_index(j)).collect();
        for &a in &diag {
            for &b in &diag {
                out.view_mut((a * rest, b * rest), (rest, rest))
                    .copy_from(&m.view((a * rest, b * rest), (rest, rest)));
            }
        }
        for (j, &s) in diag.iter().enumerate() {
            let jn = s / self.d;
            for y in (0..dim / self.d).filter(|&y| y != jn) {
                let i = y * self.d + j;
                let src = m.view((i * rest, i * rest), (rest, rest)).clone_owned();
                let mut dst = out.view_mut((s * rest, s * rest), (rest, rest));
                dst += src;
            }
        }
        let moved = layout.select(&perm);
        let inv = inverse(&perm);
        let back = permute_matrix(&out, moved.dims(), &inv);
        DensityMatrix::renormalized(back, moved.select(&inv))
    }
}

/// Coincidence channel `K` on `target ⊗ control`, both of dimension `d`.
pub fn k_closed_form(d: usize) -> Result<KrausChannel> {
    CoincidenceChannel::new(d, 1)?.kraus()
}

/// `N`-line coincidence channel `K^(N)` on `target^{⊗N} ⊗ control`, guarded
/// by the policy's `max_dim`.
pub fn k_multiline(d: usize, n_lines: usize) -> Result<KrausChannel> {
    CoincidenceChannel::new(d, n_lines)?.kraus()
}

/// [`k_multiline`] with an explicit dimension bound.
pub fn k_multiline_guarded(d: usize, n_lines: usize, max_dim: usize) -> Result<KrausChannel> {
    CoincidenceChannel::with_max_dim(d, n_lines, max_dim)?.kraus()
}
