//! Factor reordering, partial trace and local operator application.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::density::DensityMatrix;
use super::layout::Label;
use crate::error::{Error, Result};

/// Maps each basis index under factor order `dims` to its index after the
/// factors are reordered so that new factor `k` is old factor `perm[k]`.
pub(crate) fn permutation_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut old_strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        old_strides[k] = old_strides[k + 1] * dims[k + 1];
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut new_strides_by_old = vec![1usize; n];
    let mut stride = 1usize;
    for k in (0..n).rev() {
        new_strides_by_old[perm[k]] = stride;
        stride *= new_dims[k];
    }
    let total: usize = dims.iter().product();
    (0..total)
        .map(|i| {
            (0..n)
                .map(|k| ((i / old_strides[k]) % dims[k]) * new_strides_by_old[k])
                .sum()
        })
        .collect()
}

fn is_identity(perm: &[usize]) -> bool {
    perm.iter().enumerate().all(|(i, &p)| i == p)
}

pub(crate) fn permute_matrix(m: &DMatrix<Complex64>, dims: &[usize], perm: &[usize]) -> DMatrix<Complex64> {
    if is_identity(perm) {
        return m.clone();
    }
    let map = permutation_map(dims, perm);
    let n = map.len();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    out
}

pub(crate) fn permute_vector(v: &DVector<Complex64>, dims: &[usize], perm: &[usize]) -> DVector<Complex64> {
    if is_identity(perm) {
        return v.clone();
    }
    let map = permutation_map(dims, perm);
    let mut out = DVector::zeros(v.len());
    for (i, &t) in map.iter().enumerate() {
        out[t] = v[i];
    }
    out
}

/// Permutation placing `front` first (in the given order), then the
/// remaining factors in their original relative order.
pub(crate) fn front_permutation(n: usize, front: &[usize]) -> Vec<usize> {
    let mut perm = front.to_vec();
    perm.extend((0..n).filter(|p| !front.contains(p)));
    perm
}

pub(crate) fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

/// Reorders the factors of `rho` into the order given by `labels`, which must
/// name every factor exactly once.
pub fn reorder(rho: &DensityMatrix, labels: &[Label]) -> Result<DensityMatrix> {
    let layout = rho.layout();
    if labels.len() != layout.len() {
        return Err(Error::InvalidLayout(format!(
            "reorder needs all {} labels, got {}",
            layout.len(),
            labels.len()
        )));
    }
    let perm = layout.positions(labels)?;
    DensityMatrix::from_parts(
        permute_matrix(rho.matrix(), layout.dims(), &perm),
        layout.select(&perm),
    )
}

/// Reduced state on `keep`, with kept factors in their original relative order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[Label]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidLayout("partial trace must keep at least one label".into()));
    }
    let layout = rho.layout();
    let mut kept = layout.positions(keep)?;
    kept.sort_unstable();
    let perm = front_permutation(layout.len(), &kept);
    let m = permute_matrix(rho.matrix(), layout.dims(), &perm);
    let dk: usize = kept.iter().map(|&p| layout.dims()[p]).product();
    let dr = layout.total_dim() / dk;
    let out = DMatrix::from_fn(dk, dk, |a, b| {
        (0..dr).map(|r| m[(a * dr + r, b * dr + r)]).sum::<Complex64>()
    });
    DensityMatrix::from_parts(out, layout.select(&kept))
}

/// `Σ_k (K_k ⊗ I) m (K_k ⊗ I)†` for `m` whose leading factor has dimension
/// `in_dim`; `rest` is the product of the remaining dimensions.
pub(crate) fn kraus_sum_front(
    kraus: &[&DMatrix<Complex64>],
    m: &DMatrix<Complex64>,
    rest: usize,
) -> DMatrix<Complex64> {
    let in_dim = m.nrows() / rest;
    let out_dim = kraus.first().map_or(in_dim, |k| k.nrows());
    let mut acc = DMatrix::<Complex64>::zeros(out_dim * rest, out_dim * rest);
    let zero = Complex64::new(0.0, 0.0);
    for k in kraus {
        // left multiply: Y[(a', r), col] = Σ_a K[a', a] m[(a, r), col]
        let mut y = DMatrix::<Complex64>::zeros(out_dim * rest, in_dim * rest);
        for a2 in 0..out_dim {
            for a in 0..in_dim {
                let c = k[(a2, a)];
                if c == zero {
                    continue;
                }
                let src = m.rows(a * rest, rest);
                let mut dst = y.rows_mut(a2 * rest, rest);
                dst.zip_apply(&src, |d, s| *d += c * s);
            }
        }
        // right multiply by (K ⊗ I)†
        for b2 in 0..out_dim {
            for b in 0..in_dim {
                let c = k[(b2, b)].conj();
                if c == zero {
                    continue;
                }
                let src = y.columns(b * rest, rest);
                let mut dst = acc.columns_mut(b2 * rest, rest);
                dst.zip_apply(&src, |d, s| *d += c * s);
            }
        }
    }
    acc
}

/// Applies a Kraus map to the factors `acting_on` (in that order; their
/// dimension product must equal each operator's column count) with identity
/// on every other factor. When the map changes dimension it must act on a
/// single factor, whose dimension is updated in the output layout.
pub fn apply_local(
    kraus: &[&DMatrix<Complex64>],
    rho: &DensityMatrix,
    acting_on: &[Label],
) -> Result<DensityMatrix> {
    let layout = rho.layout();
    let pos = layout.positions(acting_on)?;
    if pos.is_empty() {
        return Err(Error::InvalidLayout("no target labels".into()));
    }
    let in_dim: usize = pos.iter().map(|&p| layout.dims()[p]).product();
    let first = kraus
        .first()
        .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
    if first.ncols() != in_dim {
        return Err(Error::DimensionMismatch {
            expected: in_dim,
            found: first.ncols(),
        });
    }
    let out_dim = first.nrows();
    if out_dim != in_dim && pos.len() != 1 {
        return Err(Error::InvalidChannel(
            "dimension-changing maps must act on a single factor".into(),
        ));
    }
    let perm = front_permutation(layout.len(), &pos);
    let m = permute_matrix(rho.matrix(), layout.dims(), &perm);
    let rest = layout.total_dim() / in_dim;
    let out = kraus_sum_front(kraus, &m, rest);
    let mut out_layout = layout.select(&perm);
    if out_dim != in_dim {
        out_layout = out_layout.with_dim(&acting_on[0], out_dim)?;
    }
    let inv = inverse(&perm);
    let back = permute_matrix(&out, out_layout.dims(), &inv);
    DensityMatrix::renormalized(back, out_layout.select(&inv))
}

/// Applies a unitary (or any single operator) to `acting_on`.
pub fn apply_operator(op: &DMatrix<Complex64>, rho: &DensityMatrix, acting_on: &[Label]) -> Result<DensityMatrix> {
    apply_local(&[op], rho, acting_on)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{states, Ket, SubsystemLayout, Tensor};

    fn layout(pairs: &[(Label, usize)]) -> SubsystemLayout {
        SubsystemLayout::from_pairs(pairs.iter().cloned()).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let phi = states::phi_plus(2);
        let rho = DensityMatrix::from_ket(&phi, layout(&[(Label::A, 2), (Label::C, 2)])).unwrap();
        let red = partial_trace(&rho, &[Label::A]).unwrap();
        let expect = DMatrix::<Complex64>::identity(2, 2).unscale(2.0);
        assert!((red.matrix() - expect).norm() < 1e-15);
        assert!(matches!(
            partial_trace(&rho, &[Label::B(1)]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn product_factorization() {
        let a = Ket::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        let b = states::fourier_ket(3, 1).unwrap();
        let ra = DensityMatrix::from_ket(&a, layout(&[(Label::Named("first".into()), 2)])).unwrap();
        let rb = DensityMatrix::from_ket(&b, layout(&[(Label::Named("second".into()), 3)])).unwrap();
        let joint = ra.tensor(&rb).unwrap();
        let back = partial_trace(&joint, &[Label::Named("first".into())]).unwrap();
        assert!(back.max_abs_diff(&ra) < 1e-12);
        let back_b = partial_trace(&joint, &[Label::Named("second".into())]).unwrap();
        assert!(back_b.max_abs_diff(&rb) < 1e-12);
    }

    #[test]
    fn ghz_two_party_marginal() {
        // explicit index-summation oracle: Tr_C |GHZ><GHZ| with GHZ = (|000>+|111>)/√2
        let ghz = states::ghz(2, 3).unwrap();
        let l = layout(&[(Label::B(1), 2), (Label::B(2), 2), (Label::C, 2)]);
        let rho = DensityMatrix::from_ket(&ghz, l).unwrap();
        let red = partial_trace(&rho, &[Label::B(2), Label::B(1)]).unwrap();
        assert_eq!(red.layout().labels(), &[Label::B(1), Label::B(2)]);
        let mut oracle = DMatrix::<Complex64>::zeros(4, 4);
        let amp = ghz.as_slice();
        for b1 in 0..2 {
            for b2 in 0..2 {
                for b1p in 0..2 {
                    for b2p in 0..2 {
                        for c in 0..2 {
                            oracle[(2 * b1 + b2, 2 * b1p + b2p)] +=
                                amp[4 * b1 + 2 * b2 + c] * amp[4 * b1p + 2 * b2p + c].conj();
                        }
                    }
                }
            }
        }
        assert!((red.matrix() - &oracle).norm() < 1e-15);
        assert!((oracle[(0, 0)].re - 0.5).abs() < 1e-15 && (oracle[(3, 3)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn apply_on_inner_factor_matches_explicit_kronecker() {
        let x = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let l = layout(&[(Label::A, 2), (Label::B(1), 3), (Label::C, 2)]);
        let psi = Ket::normalized(
            (0..12)
                .map(|i| Complex64::new(i as f64 + 1.0, (i % 5) as f64 - 2.0))
                .collect(),
        )
        .unwrap();
        let rho = DensityMatrix::from_ket(&psi, l).unwrap();
        let out = apply_operator(&x, &rho, &[Label::C]).unwrap();
        let full = DMatrix::<Complex64>::identity(6, 6).tensor(&x);
        let expect = &full * rho.matrix() * full.adjoint();
        assert!((out.matrix() - expect).norm() < 1e-12);
    }

    #[test]
    fn reorder_round_trip() {
        let l = layout(&[(Label::A, 2), (Label::B(1), 3), (Label::C, 2)]);
        let psi = Ket::normalized((0..12).map(|i| Complex64::new(1.0, i as f64)).collect()).unwrap();
        let rho = DensityMatrix::from_ket(&psi, l).unwrap();
        let r = reorder(&rho, &[Label::C, Label::A, Label::B(1)]).unwrap();
        let back = reorder(&r, &[Label::A, Label::B(1), Label::C]).unwrap();
        assert_eq!(back, rho);
    }
}
