//! Kraus channels, vacuum extensions and Choi-matrix channel equality.
//!
//! Choi matrices use the unnormalized convention
//! `C = Σ_{ij} |i><j| ⊗ Φ(|i><j|)` with the input factor first, so the trace
//! of a channel's Choi matrix equals its input dimension.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::policy;
use crate::tensor::spectral::hermitian_eigenvalues;
use crate::tensor::{apply_local, DensityMatrix, Label, Operator, Tensor};

/// Completely positive trace-preserving map given by Kraus operators of
/// shape `out_dim × in_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kraus: Vec<Operator>,
    in_dim: usize,
    out_dim: usize,
}

impl KrausChannel {
    /// Checks shapes and trace preservation at the spectral tolerance. The
    /// list is kept as given, zero operators included.
    pub fn new(kraus: Vec<Operator>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::InvalidChannel("zero-dimensional Kraus operator".into()));
        }
        if let Some(bad) = kraus.iter().find(|k| k.rows() != out_dim || k.cols() != in_dim) {
            return Err(Error::InvalidChannel(format!(
                "mixed Kraus shapes {}x{} and {}x{}",
                out_dim,
                in_dim,
                bad.rows(),
                bad.cols()
            )));
        }
        let ch = Self {
            kraus,
            in_dim,
            out_dim,
        };
        let defect = ch.trace_preservation_defect();
        if defect > policy().spectral_tol {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(ch)
    }

    /// Like [`KrausChannel::new`] but drops operators whose max-abs entry is
    /// below the zero threshold.
    pub fn new_pruned(kraus: Vec<Operator>) -> Result<Self> {
        let z = policy().zero_threshold;
        let shape = kraus.first().map(|k| (k.rows(), k.cols()));
        let kept: Vec<Operator> = kraus.into_iter().filter(|k| k.max_abs() > z).collect();
        if kept.is_empty() {
            let (r, c) = shape.ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
            return Self::new(vec![Operator::zeros(r, c)]);
        }
        Self::new(kept)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![Operator::identity(d)],
            in_dim: d,
            out_dim: d,
        }
    }

    /// Single-operator channel; `u` must be unitary.
    pub fn unitary(u: Operator) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    /// `max |(Σ K†K − I)_ij|`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut s = DMatrix::<Complex64>::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            s += k.matrix().adjoint() * k.matrix();
        }
        s -= DMatrix::identity(self.in_dim, self.in_dim);
        s.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Kraus list `K'_k = Σ_i u[k, i] K_i` for an isometry `u`
    /// (rows ≥ current Kraus count).
    pub fn remixed(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.ncols() != self.kraus.len() {
            return Err(Error::DimensionMismatch {
                expected: self.kraus.len(),
                found: u.ncols(),
            });
        }
        let kraus = (0..u.nrows())
            .map(|k| {
                let mut acc = DMatrix::zeros(self.out_dim, self.in_dim);
                for (i, op) in self.kraus.iter().enumerate() {
                    acc += op.matrix() * u[(k, i)];
                }
                Operator::from_matrix(acc)
            })
            .collect();
        Self::new(kraus)
    }

    /// `self ⊗ other`, Kraus operators indexed (i, j) with `i` most significant.
    pub fn tensor(&self, other: &KrausChannel) -> Self {
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a.tensor(b)))
            .collect();
        Self {
            kraus,
            in_dim: self.in_dim * other.in_dim,
            out_dim: self.out_dim * other.out_dim,
        }
    }

    /// `n`-fold tensor power.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("tensor power must be ≥ 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor(self);
        }
        Ok(acc)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &KrausChannel) -> Result<Self> {
        if after.in_dim != self.out_dim {
            return Err(Error::DimensionMismatch {
                expected: self.out_dim,
                found: after.in_dim,
            });
        }
        Self::new_pruned(
            after
                .kraus
                .iter()
                .flat_map(|b| self.kraus.iter().map(move |a| b * a))
                .collect(),
        )
    }

    /// Compression onto the computational-basis vectors `indices` (same on
    /// input and output). Fails unless the compressed map is trace preserving,
    /// i.e. unless the subspace is invariant.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.in_dim.min(self.out_dim)) {
            return Err(Error::OutOfRange {
                what: "restriction index",
                value: bad,
                bound: self.in_dim.min(self.out_dim),
            });
        }
        let n = indices.len();
        Self::new_pruned(
            self.kraus
                .iter()
                .map(|k| Operator::from_fn(n, n, |r, c| k.matrix()[(indices[r], indices[c])]))
                .collect(),
        )
    }

    /// `Σ_k K_k m K_k†` on the full input space.
    pub fn apply_matrix(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut acc = DMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            acc += k.matrix() * m * k.matrix().adjoint();
        }
        acc
    }

    /// Applies the channel to the factors `acting_on` of `rho`.
    pub fn apply(&self, rho: &DensityMatrix, acting_on: &[Label]) -> Result<DensityMatrix> {
        let ops: Vec<&DMatrix<Complex64>> = self.kraus.iter().map(|k| k.matrix()).collect();
        apply_local(&ops, rho, acting_on)
    }
}

/// Free-function form of [`KrausChannel::apply`].
pub fn apply(ch: &KrausChannel, rho: &DensityMatrix, acting_on: &[Label]) -> Result<DensityMatrix> {
    ch.apply(rho, acting_on)
}

/// Information-erasing channel with Kraus set `{ |j><i| : i = 0..d-1 }`.
pub fn erasing_channel(d: usize, j: usize) -> Result<KrausChannel> {
    if j >= d {
        return Err(Error::OutOfRange {
            what: "erasing output",
            value: j,
            bound: d,
        });
    }
    KrausChannel::new((0..d).map(|i| Operator::ket_bra(d, j, i)).collect::<Result<_>>()?)
}

/// Channel on `d + 1` dimensions whose last basis vector is the vacuum
/// `|triv>`; realized Kraus operators are `K_i ⊕ α_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedChannel {
    base: KrausChannel,
    amplitudes: Vec<Complex64>,
    realized: KrausChannel,
}

impl ExtendedChannel {
    pub fn base(&self) -> &KrausChannel {
        &self.base
    }

    #[cfg(test)]
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn realized(&self) -> &KrausChannel {
        &self.realized
    }

    /// Target dimension `d` (the realized channel acts on `d + 1`).
    pub fn target_dim(&self) -> usize {
        self.base.in_dim()
    }

    pub fn is_canonical(&self, tol: f64) -> bool {
        self.amplitudes
            .iter()
            .enumerate()
            .all(|(i, a)| (a - Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)).norm() <= tol)
    }
}

/// Attaches vacuum amplitudes to a square base channel.
pub fn vacuum_extend(base: &KrausChannel, amplitudes: &[Complex64]) -> Result<ExtendedChannel> {
    if base.in_dim() != base.out_dim() {
        return Err(Error::InvalidChannel(
            "vacuum extension needs a channel with equal input and output dimension".into(),
        ));
    }
    if amplitudes.len() != base.len() {
        return Err(Error::DimensionMismatch {
            expected: base.len(),
            found: amplitudes.len(),
        });
    }
    let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > policy().spectral_tol {
        return Err(Error::InvalidAmplitudes(norm_sq));
    }
    let d = base.in_dim();
    let realized = base
        .kraus()
        .iter()
        .zip(amplitudes)
        .map(|(k, &a)| {
            let mut m = DMatrix::zeros(d + 1, d + 1);
            m.view_mut((0, 0), (d, d)).copy_from(k.matrix());
            m[(d, d)] = a;
            Operator::from_matrix(m)
        })
        .collect();
    Ok(ExtendedChannel {
        base: base.clone(),
        amplitudes: amplitudes.to_vec(),
        realized: KrausChannel::new(realized)?,
    })
}

/// Unitary `U` with `U α = e_0`: a Householder reflection followed by a
/// phase on the first row.
pub(crate) fn householder_to_e0(alpha: &[Complex64]) -> DMatrix<Complex64> {
    let n = alpha.len();
    let x = DVector::from_column_slice(alpha);
    let norm = x.norm();
    let a0 = x[0];
    let phase = if a0.norm() > 0.0 {
        a0 / a0.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut w = x.clone();
    w[0] -= phase * norm;
    let ww = w.norm_squared();
    let mut h = DMatrix::<Complex64>::identity(n, n);
    if ww > f64::EPSILON * f64::EPSILON {
        h -= (&w * w.adjoint()) * Complex64::new(2.0 / ww, 0.0);
    }
    let mut row0 = h.row_mut(0);
    row0 *= phase.conj();
    h
}

/// Kraus representation of the same extended channel whose amplitude
/// vector is `(1, 0, …, 0)`.
pub fn canonicalize_extension(ext: &ExtendedChannel) -> Result<ExtendedChannel> {
    let u = householder_to_e0(&ext.amplitudes);
    let base = ext.base.remixed(&u)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); ext.amplitudes.len()];
    amps[0] = Complex64::new(1.0, 0.0);
    vacuum_extend(&base, &amps)
}

/// Unnormalized Choi matrix, input factor first.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    entries: DMatrix<Complex64>,
    in_dim: usize,
    out_dim: usize,
}

impl ChoiMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.entries)
            .last()
            .copied()
            .unwrap_or(0.0)
    }

    /// Trace over the output factor; equals `I_in` for trace-preserving maps.
    pub fn output_marginal(&self) -> DMatrix<Complex64> {
        let (di, dout) = (self.in_dim, self.out_dim);
        DMatrix::from_fn(di, di, |a, b| {
            (0..dout)
                .map(|o| self.entries[(a * dout + o, b * dout + o)])
                .sum()
        })
    }

    pub fn frobenius_distance(&self, other: &ChoiMatrix) -> Result<f64> {
        if self.entries.shape() != other.entries.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.entries.nrows(),
                found: other.entries.nrows(),
            });
        }
        Ok((&self.entries - &other.entries).norm())
    }
}

pub fn choi(ch: &KrausChannel) -> ChoiMatrix {
    let (di, dout) = (ch.in_dim(), ch.out_dim());
    let n = di * dout;
    let mut entries = DMatrix::<Complex64>::zeros(n, n);
    for k in ch.kraus() {
        let v = DVector::from_fn(n, |idx, _| k.matrix()[(idx % dout, idx / dout)]);
        entries += &v * v.adjoint();
    }
    ChoiMatrix {
        entries,
        in_dim: di,
        out_dim: dout,
    }
}

/// Outcome of a Choi-distance comparison; the distance is always reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelComparison {
    pub equal: bool,
    pub distance: f64,
    pub tolerance: f64,
}

/// `‖choi(a) − choi(b)‖_F ≤ tol`. The Choi dimension `in·out` is subject
/// to the policy's `max_dim`.
pub fn channels_equal(a: &KrausChannel, b: &KrausChannel, tol: f64) -> Result<ChannelComparison> {
    if a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.in_dim() * a.out_dim(),
            found: b.in_dim() * b.out_dim(),
        });
    }
    policy().guard(a.in_dim() * a.out_dim())?;
    let distance = choi(a).frobenius_distance(&choi(b))?;
    Ok(ChannelComparison {
        equal: distance <= tol,
        distance,
        tolerance: tol,
    })
}

/// [`channels_equal`] at the policy's spectral tolerance.
pub fn channels_equal_default(a: &KrausChannel, b: &KrausChannel) -> Result<ChannelComparison> {
    channels_equal(a, b, policy().spectral_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{states, Ket, SubsystemLayout};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single(d: usize) -> SubsystemLayout {
        SubsystemLayout::from_pairs([(Label::A, d)]).unwrap()
    }

    #[test]
    fn erasing_kraus_list() {
        let ch = erasing_channel(3, 2).unwrap();
        assert_eq!(ch.len(), 3);
        for (i, k) in ch.kraus().iter().enumerate() {
            assert_eq!(k, &Operator::ket_bra(3, 2, i).unwrap());
        }
        assert!(matches!(erasing_channel(2, 2), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn erasing_outputs_fixed_state() {
        let plus = DensityMatrix::from_ket(&states::fourier_ket(2, 0).unwrap(), single(2)).unwrap();
        let out = erasing_channel(2, 0).unwrap().apply(&plus, &[Label::A]).unwrap();
        let zero = DensityMatrix::from_ket(&Ket::basis(2, 0).unwrap(), single(2)).unwrap();
        assert!(out.max_abs_diff(&zero) < 1e-15);

        let mixed = DensityMatrix::maximally_mixed(single(2));
        let e1 = erasing_channel(2, 1).unwrap();
        let once = e1.apply(&mixed, &[Label::A]).unwrap();
        let twice = e1.apply(&once, &[Label::A]).unwrap();
        let one = DensityMatrix::from_ket(&Ket::basis(2, 1).unwrap(), single(2)).unwrap();
        assert!(once.max_abs_diff(&one) < 1e-15);
        assert!(twice.max_abs_diff(&once) < 1e-15);
    }

    #[test]
    fn erasing_on_half_of_bell_state() {
        // direct Kraus-sum oracle: Σ_i (|0><i| ⊗ I)|Φ+><Φ+|(|i><0| ⊗ I) = |0><0| ⊗ I/2
        let l = SubsystemLayout::from_pairs([(Label::A, 2), (Label::C, 2)]).unwrap();
        let rho = DensityMatrix::from_ket(&states::phi_plus(2), l).unwrap();
        let out = erasing_channel(2, 0).unwrap().apply(&rho, &[Label::A]).unwrap();
        let mut expect = DMatrix::<Complex64>::zeros(4, 4);
        expect[(0, 0)] = c(0.5, 0.0);
        expect[(1, 1)] = c(0.5, 0.0);
        assert!((out.matrix() - expect).norm() < 1e-15);
    }

    #[test]
    fn identity_channel_is_noop() {
        let l = SubsystemLayout::from_pairs([(Label::A, 3)]).unwrap();
        let rho = DensityMatrix::from_ket(&states::fourier_ket(3, 2).unwrap(), l).unwrap();
        let out = KrausChannel::identity(3).apply(&rho, &[Label::A]).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn rejects_non_trace_preserving_and_bad_shapes() {
        assert!(matches!(
            KrausChannel::new(vec![Operator::ket_bra(2, 0, 0).unwrap()]),
            Err(Error::NotTracePreserving(_))
        ));
        assert!(KrausChannel::new(vec![Operator::identity(2), Operator::identity(3)]).is_err());
        assert!(KrausChannel::new(vec![]).is_err());
    }

    #[test]
    fn apply_dimension_mismatch() {
        let l = SubsystemLayout::from_pairs([(Label::A, 3)]).unwrap();
        let rho = DensityMatrix::maximally_mixed(l);
        assert!(matches!(
            erasing_channel(2, 0).unwrap().apply(&rho, &[Label::A]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn vacuum_extension_examples() {
        let e = vacuum_extend(&erasing_channel(2, 0).unwrap(), &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let r = e.realized().kraus();
        let mut e0 = DMatrix::zeros(3, 3);
        e0[(0, 0)] = c(1.0, 0.0);
        e0[(2, 2)] = c(1.0, 0.0);
        let mut e1 = DMatrix::zeros(3, 3);
        e1[(0, 1)] = c(1.0, 0.0);
        assert_eq!(r[0].matrix(), &e0);
        assert_eq!(r[1].matrix(), &e1);

        let f = vacuum_extend(&erasing_channel(2, 1).unwrap(), &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = f.realized().kraus();
        let mut f0 = DMatrix::zeros(3, 3);
        f0[(1, 0)] = c(1.0, 0.0);
        let mut f1 = DMatrix::zeros(3, 3);
        f1[(1, 1)] = c(1.0, 0.0);
        f1[(2, 2)] = c(1.0, 0.0);
        assert_eq!(r[0].matrix(), &f0);
        assert_eq!(r[1].matrix(), &f1);
    }

    #[test]
    fn vacuum_column_is_fixed_for_canonical_amplitudes() {
        let base = erasing_channel(3, 1).unwrap();
        let e = vacuum_extend(&base, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let triv = Ket::basis(4, 3).unwrap();
        for (i, k) in e.realized().kraus().iter().enumerate() {
            let col = k.apply(&triv);
            let expect = if i == 0 { triv.clone() } else { Ket::unnormalized(vec![c(0.0, 0.0); 4]) };
            assert_eq!(col, expect);
        }
        // |triv><triv| is a fixed point
        let rho = DensityMatrix::from_ket(&triv, single(4)).unwrap();
        let out = e.realized().apply(&rho, &[Label::A]).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn vacuum_extension_rejects_unnormalized() {
        let base = erasing_channel(2, 0).unwrap();
        assert!(matches!(
            vacuum_extend(&base, &[c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::InvalidAmplitudes(_))
        ));
        assert!(vacuum_extend(&base, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn extended_erasing_channel_is_not_erasing() {
        // on d+1 dims the realized map sends |0> to |0> but keeps |triv>
        let e = vacuum_extend(&erasing_channel(2, 0).unwrap(), &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let out_triv = e
            .realized()
            .apply(&DensityMatrix::from_ket(&Ket::basis(3, 2).unwrap(), single(3)).unwrap(), &[Label::A])
            .unwrap();
        let out_one = e
            .realized()
            .apply(&DensityMatrix::from_ket(&Ket::basis(3, 1).unwrap(), single(3)).unwrap(), &[Label::A])
            .unwrap();
        assert!(out_triv.max_abs_diff(&out_one) > 0.5);
    }

    #[test]
    fn canonicalization_preserves_choi() {
        let h = 1.0 / 2f64.sqrt();
        let base = erasing_channel(2, 0).unwrap();
        for amps in [
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(h, 0.0), c(h, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, h), c(-0.5, 0.5)],
        ] {
            let e = vacuum_extend(&base, &amps).unwrap();
            let k = canonicalize_extension(&e).unwrap();
            assert!(k.is_canonical(0.0));
            let dist = choi(e.realized()).frobenius_distance(&choi(k.realized())).unwrap();
            assert!(dist <= 1e-10, "{amps:?}: {dist}");
        }
    }

    #[test]
    fn canonical_input_is_a_fixed_point() {
        let e = vacuum_extend(&erasing_channel(2, 0).unwrap(), &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(canonicalize_extension(&e).unwrap(), e);
    }

    #[test]
    fn choi_examples() {
        let id = choi(&KrausChannel::identity(2));
        let phi = states::phi_plus(2);
        let expect = phi.projector().into_matrix() * c(2.0, 0.0);
        assert!((id.entries() - expect).norm() < 1e-15);

        // direct construction: Σ_ij |i><j| ⊗ δ_ij |0><0| = I ⊗ |0><0|
        let er = choi(&erasing_channel(2, 0).unwrap());
        let expect = DMatrix::<Complex64>::identity(2, 2)
            .kronecker(Operator::ket_bra(2, 0, 0).unwrap().matrix());
        assert!((er.entries() - expect).norm() < 1e-15);
        assert!((er.output_marginal() - DMatrix::<Complex64>::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn equality_reports_distance() {
        let e0 = erasing_channel(2, 0).unwrap();
        let e1 = erasing_channel(2, 1).unwrap();
        let same = channels_equal(&e0, &e0, 1e-10).unwrap();
        assert!(same.equal && same.distance == 0.0);
        let diff = channels_equal(&e0, &e1, 1e-10).unwrap();
        // Choi oracle: I⊗|0><0| − I⊗|1><1| has four unit entries → Frobenius 2
        assert!(!diff.equal && (diff.distance - 2.0).abs() < 1e-15);
        assert!(channels_equal(&e0, &erasing_channel(3, 0).unwrap(), 1e-10).is_err());
    }

    #[test]
    fn restrict_requires_invariant_subspace() {
        let e = vacuum_extend(&erasing_channel(2, 0).unwrap(), &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let r = e.realized().restrict(&[0, 1]).unwrap();
        assert!(channels_equal(&r, &erasing_channel(2, 0).unwrap(), 1e-15).unwrap().equal);
        assert!(erasing_channel(2, 0).unwrap().restrict(&[1]).is_err());
    }
}
