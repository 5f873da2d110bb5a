//! Coherently controlled configurations of channels.
//!
//! Every combinator here returns a channel on `target ⊗ control` with the
//! control as the least significant (last) factor. Control basis state `|k>`
//! selects configuration `k`: for order control, the cyclic order in which
//! branch `k` is applied last; for choice control, branch `k` itself.
//!
//! [`cyclic_switch`] and [`controlled_choice`] enumerate Kraus index tuples
//! and double as brute-force oracles for the closed forms [`k_closed_form`]
//! and [`k_multiline`].

mod coincidence;
mod oracle;
mod tdecomp;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use coincidence::{k_closed_form, k_multiline, k_multiline_guarded, CoincidenceChannel, KRAUS_ENTRY_CAP};
pub use oracle::{multiline_enumeration, order_enumeration, ENUMERATION_CAP};
pub use tdecomp::{t_decomposition, TDecomposition};

use crate::channel::{vacuum_extend, ExtendedChannel, KrausChannel};
use crate::error::{Error, Result};
use crate::numeric::policy;
use crate::tensor::Operator;

fn projector(d: usize, k: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(d, d);
    m[(k, k)] = Complex64::new(1.0, 0.0);
    m
}

/// Iterates over all index tuples with per-position radices `radix`,
/// first position most significant.
pub(crate) fn index_tuples(radix: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = radix.iter().product();
    (0..total).map(move |mut flat| {
        let mut t = vec![0; radix.len()];
        for p in (0..radix.len()).rev() {
            t[p] = flat % radix[p];
            flat /= radix[p];
        }
        t
    })
}

/// Rejects enumerations over more than [`ENUMERATION_CAP`] tuples or whose
/// dense Kraus list (`op_dim × op_dim` per tuple) exceeds [`KRAUS_ENTRY_CAP`].
pub(crate) fn check_enumeration(radix: &[usize], op_dim: usize) -> Result<()> {
    let total = radix.iter().fold(1usize, |acc, &r| acc.saturating_mul(r));
    if total > ENUMERATION_CAP {
        return Err(Error::ResourceGuard {
            dim: total,
            max: ENUMERATION_CAP,
        });
    }
    let entries = total.saturating_mul(op_dim.saturating_mul(op_dim));
    if entries > KRAUS_ENTRY_CAP {
        return Err(Error::ResourceGuard {
            dim: entries,
            max: KRAUS_ENTRY_CAP,
        });
    }
    Ok(())
}

/// Whether an enumeration with these radices and operator size fits the caps.
pub fn enumeration_feasible(radix: &[usize], op_dim: usize) -> bool {
    check_enumeration(radix, op_dim).is_ok()
}

fn square_dim(chs: &[&KrausChannel]) -> Result<usize> {
    let first = chs
        .first()
        .ok_or_else(|| Error::InvalidParameter("no branch channels".into()))?;
    let d = first.in_dim();
    for ch in chs {
        if ch.in_dim() != d || ch.out_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: if ch.in_dim() != d { ch.in_dim() } else { ch.out_dim() },
            });
        }
    }
    Ok(d)
}

/// Two-channel quantum SWITCH on `target ⊗ qubit control`:
/// `S_ij = E_j F_i ⊗ |0><0| + F_i E_j ⊗ |1><1|`, so control `|0>` runs `F`
/// then `E`, and control `|1>` runs `E` then `F`.
pub fn switch_two(e: &KrausChannel, f: &KrausChannel) -> Result<KrausChannel> {
    let d = square_dim(&[e, f])?;
    policy().guard(2 * d)?;
    let p0 = projector(2, 0);
    let p1 = projector(2, 1);
    let mut kraus = Vec::with_capacity(e.len() * f.len());
    for fi in f.kraus() {
        for ej in e.kraus() {
            let ef = ej.matrix() * fi.matrix();
            let fe = fi.matrix() * ej.matrix();
            kraus.push(Operator::from_matrix(ef.kronecker(&p0) + fe.kronecker(&p1)));
        }
    }
    KrausChannel::new_pruned(kraus)
}

/// Two-way controlled choice on `(d+1) ⊗ qubit control`:
/// `T_ij = Ẽ_i β_j ⊗ |0><0| + F̃_j α_i ⊗ |1><1|`, where `α`, `β` are the
/// vacuum amplitudes of `e` and `f`.
pub fn choice_two(e: &ExtendedChannel, f: &ExtendedChannel) -> Result<KrausChannel> {
    let (re, rf) = (e.realized(), f.realized());
    let d1 = square_dim(&[re, rf])?;
    policy().guard(2 * d1)?;
    let p0 = projector(2, 0);
    let p1 = projector(2, 1);
    let mut kraus = Vec::with_capacity(re.len() * rf.len());
    for (ei, &alpha) in re.kraus().iter().zip(e.amplitudes()) {
        for (fj, &beta) in rf.kraus().iter().zip(f.amplitudes()) {
            kraus.push(Operator::from_matrix(
                (ei.matrix() * beta).kronecker(&p0) + (fj.matrix() * alpha).kronecker(&p1),
            ));
        }
    }
    KrausChannel::new_pruned(kraus)
}

/// Restriction of a channel on `(d+1) ⊗ control` to the non-vacuum target
/// sector `d ⊗ control`.
pub fn restrict_to_target(ch: &KrausChannel, target_dim: usize, control_dim: usize) -> Result<KrausChannel> {
    if ch.in_dim() != (target_dim + 1) * control_dim {
        return Err(Error::DimensionMismatch {
            expected: (target_dim + 1) * control_dim,
            found: ch.in_dim(),
        });
    }
    let idx: Vec<usize> = (0..target_dim)
        .flat_map(|a| (0..control_dim).map(move |c| a * control_dim + c))
        .collect();
    ch.restrict(&idx)
}

/// Quantum SWITCH over the `n` cyclic orders of `n` channels, with an
/// `n`-level control:
/// `S_{i_0…i_{n-1}} = Σ_j E^{(j)}_{i_j} E^{(j⊕1)}_{i_{j⊕1}} ⋯ E^{(j⊕n-1)}_{i_{j⊕n-1}} ⊗ |j><j|`.
/// All Kraus tuples are enumerated; zero operators are dropped.
pub fn cyclic_switch(channels: &[KrausChannel]) -> Result<KrausChannel> {
    let refs: Vec<&KrausChannel> = channels.iter().collect();
    let d = square_dim(&refs)?;
    let n = channels.len();
    policy().guard(d * n)?;
    let radix: Vec<usize> = channels.iter().map(|c| c.len()).collect();
    check_enumeration(&radix, d * n)?;
    let projs: Vec<_> = (0..n).map(|j| projector(n, j)).collect();
    let mut kraus = Vec::new();
    for t in index_tuples(&radix) {
        let mut s = DMatrix::<Complex64>::zeros(d * n, d * n);
        for (j, pj) in projs.iter().enumerate() {
            let mut prod = channels[j].kraus()[t[j]].matrix().clone();
            for step in 1..n {
                let l = (j + step) % n;
                prod *= channels[l].kraus()[t[l]].matrix();
            }
            s += prod.kronecker(pj);
        }
        kraus.push(Operator::from_matrix(s));
    }
    KrausChannel::new_pruned(kraus)
}

/// Controlled choice among `n` extended channels, restricted to the target
/// sector: `T_{i_0…i_{n-1}} = Σ_j (Π_{l≠j} α^{(l)}_{i_l}) E^{(j)}_{i_j} ⊗ |j><j|`.
pub fn controlled_choice(channels: &[ExtendedChannel]) -> Result<KrausChannel> {
    let bases: Vec<&KrausChannel> = channels.iter().map(|c| c.base()).collect();
    let d = square_dim(&bases)?;
    let n = channels.len();
    policy().guard(d * n)?;
    let tol = policy().spectral_tol;
    for ch in channels {
        let s: f64 = ch.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        if (s - 1.0).abs() > tol {
            return Err(Error::InvalidAmplitudes(s));
        }
    }
    let radix: Vec<usize> = bases.iter().map(|c| c.len()).collect();
    check_enumeration(&radix, d * n)?;
    let projs: Vec<_> = (0..n).map(|j| projector(n, j)).collect();
    let mut kraus = Vec::new();
    for t in index_tuples(&radix) {
        let mut s = DMatrix::<Complex64>::zeros(d * n, d * n);
        for (j, pj) in projs.iter().enumerate() {
            let weight: Complex64 = (0..n)
                .filter(|&l| l != j)
                .map(|l| channels[l].amplitudes()[t[l]])
                .product();
            if weight.norm() == 0.0 {
                continue;
            }
            s += (bases[j].kraus()[t[j]].matrix() * weight).kronecker(pj);
        }
        kraus.push(Operator::from_matrix(s));
    }
    KrausChannel::new_pruned(kraus)
}

/// Extension of the `n`-fold tensor power: base `E^{⊗n}` with amplitudes
/// `α_{i_1} ⋯ α_{i_n}` (one transmission line per factor).
pub fn extended_tensor_power(ext: &ExtendedChannel, n: usize) -> Result<ExtendedChannel> {
    let base = ext.base().tensor_power(n)?;
    let mut amps = ext.amplitudes().to_vec();
    for _ in 1..n {
        amps = amps
            .iter()
            .flat_map(|a| ext.amplitudes().iter().map(move |b| a * b))
            .collect();
    }
    vacuum_extend(&base, &amps)
}

/// Vacuum extension of the erasing channel onto `|l>` with amplitudes
/// `α_i = <i|l>`, the extension under which order and choice coincide.
pub fn coincident_extension(d: usize, l: usize) -> Result<ExtendedChannel> {
    let base = crate::channel::erasing_channel(d, l)?;
    let amps: Vec<Complex64> = (0..d)
        .map(|i| Complex64::new(if i == l { 1.0 } else { 0.0 }, 0.0))
        .collect();
    vacuum_extend(&base, &amps)
}

/// The `d` orthogonal erasing channels `E_0, …, E_{d-1}`.
pub fn erasing_family(d: usize) -> Result<Vec<KrausChannel>> {
    (0..d).map(|l| crate::channel::erasing_channel(d, l)).collect()
}

/// Which configuration the control selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    Order,
    Choice,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchChannel {
    Plain(KrausChannel),
    Extended(ExtendedChannel),
}

impl BranchChannel {
    fn base(&self) -> &KrausChannel {
        match self {
            BranchChannel::Plain(c) => c,
            BranchChannel::Extended(e) => e.base(),
        }
    }
}

/// Full description of a controlled configuration of `d` branch channels,
/// each used on `n_lines` parallel transmission lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlledChannelSpec {
    pub d: usize,
    pub mode: ControlMode,
    pub branch_channels: Vec<BranchChannel>,
    pub n_lines: usize,
}

impl ControlledChannelSpec {
    /// Orthogonal erasing channels, with the coincident extensions in choice mode.
    pub fn erasing(d: usize, mode: ControlMode, n_lines: usize) -> Result<Self> {
        let branch_channels = (0..d)
            .map(|l| match mode {
                ControlMode::Order => crate::channel::erasing_channel(d, l).map(BranchChannel::Plain),
                ControlMode::Choice => coincident_extension(d, l).map(BranchChannel::Extended),
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            d,
            mode,
            branch_channels,
            n_lines,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.branch_channels.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: self.branch_channels.len(),
            });
        }
        if self.n_lines == 0 {
            return Err(Error::InvalidParameter("n_lines must be ≥ 1".into()));
        }
        if self.mode == ControlMode::Choice
            && self
                .branch_channels
                .iter()
                .any(|b| matches!(b, BranchChannel::Plain(_)))
        {
            return Err(Error::InvalidParameter(
                "choice mode needs extended branch channels".into(),
            ));
        }
        Ok(())
    }

    /// Channel on `target^{⊗n_lines} ⊗ control` by brute-force enumeration.
    pub fn build(&self) -> Result<KrausChannel> {
        self.validate()?;
        match self.mode {
            ControlMode::Order => {
                let chans = self
                    .branch_channels
                    .iter()
                    .map(|b| b.base().tensor_power(self.n_lines))
                    .collect::<Result<Vec<_>>>()?;
                cyclic_switch(&chans)
            }
            ControlMode::Choice => {
                let chans = self
                    .branch_channels
                    .iter()
                    .map(|b| match b {
                        BranchChannel::Extended(e) => extended_tensor_power(e, self.n_lines),
                        BranchChannel::Plain(_) => unreachable!("validated"),
                    })
                    .collect::<Result<Vec<_>>>()?;
                controlled_choice(&chans)
            }
        }
    }
}

#[cfg(test)]
mod tests;
