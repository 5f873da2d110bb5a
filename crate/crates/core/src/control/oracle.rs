//! Brute-force Kraus enumerations of the controlled order of orthogonal
//! erasing channels. Slow, capped, and independent of the closed forms.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_enumeration, cyclic_switch, erasing_family, index_tuples};
use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::numeric::checked_pow;
use crate::tensor::{Operator, Tensor};

/// Largest number of Kraus index tuples an enumeration may visit.
pub const ENUMERATION_CAP: usize = 65_536;

/// Cyclic SWITCH of the `d` erasing channels `E_l = {|l><i|}` by enumerating
/// all `d^d` index tuples.
pub fn order_enumeration(d: usize) -> Result<KrausChannel> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("need d ≥ 2, got {d}")));
    }
    cyclic_switch(&erasing_family(d)?)
}

fn ket_bra(d: usize, r: usize, c: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(d, d);
    m[(r, c)] = Complex64::new(1.0, 0.0);
    m
}

/// `N`-line controlled order of erasing channels, built operator by operator:
/// for index strings `I_0, …, I_{d-1} ∈ [d]^N`,
/// `S = Σ_j ⊗_n (E^{(j)}_{I_j[n]} E^{(j⊕1)}_{I_{j⊕1}[n]} ⋯) ⊗ |j><j|`.
#[allow(clippy::needless_range_loop)]
pub fn multiline_enumeration(d: usize, n_lines: usize) -> Result<KrausChannel> {
    if d < 2 || n_lines == 0 {
        return Err(Error::InvalidParameter(format!(
            "need d ≥ 2 and N ≥ 1, got d={d}, N={n_lines}"
        )));
    }
    let strings = checked_pow(d, n_lines).ok_or(Error::ResourceGuard {
        dim: usize::MAX,
        max: ENUMERATION_CAP,
    })?;
    let radix = vec![strings; d];
    check_enumeration(&radix, strings * d)?;
    let digits = |s: usize| -> Vec<usize> {
        let mut out = vec![0; n_lines];
        let mut s = s;
        for n in (0..n_lines).rev() {
            out[n] = s % d;
            s /= d;
        }
        out
    };
    let dim = strings * d;
    let mut kraus = Vec::new();
    for t in index_tuples(&radix) {
        let idx: Vec<Vec<usize>> = t.iter().map(|&s| digits(s)).collect();
        let mut s = DMatrix::<Complex64>::zeros(dim, dim);
        for j in 0..d {
            let mut lines: Option<DMatrix<Complex64>> = None;
            for line in 0..n_lines {
                let mut prod = DMatrix::<Complex64>::identity(d, d);
                for k in 0..d {
                    let l = (j + k) % d;
                    prod *= ket_bra(d, l, idx[l][line]);
                }
                lines = Some(match lines {
                    None => prod,
                    Some(acc) => acc.tensor(&prod),
                });
            }
            s += lines.expect("n_lines ≥ 1").kronecker(&ket_bra(d, j, j));
        }
        kraus.push(Operator::from_matrix(s));
    }
    KrausChannel::new_pruned(kraus)
}
