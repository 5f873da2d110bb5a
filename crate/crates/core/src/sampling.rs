//! Seeded random test inputs: Haar-like unitaries, pure and mixed states,
//! normalized amplitude vectors. Nothing in the simulation path draws
//! random numbers; these helpers exist for property tests, sweeps over
//! random encodings and the CLI's `random-seeded` option.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::tensor::{DensityMatrix, Ket, SubsystemLayout};

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unit vector drawn from the complex Gaussian ensemble.
pub fn random_amplitudes<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Ket {
    Ket::unnormalized(random_amplitudes(rng, dim))
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase fix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let mut col = u.column_mut(j);
        col *= ph;
    }
    u
}

/// Mixed state `G G† / Tr(G G†)` with `G` a `dim × rank` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(
    rng: &mut R,
    layout: SubsystemLayout,
    rank: usize,
) -> Result<DensityMatrix> {
    let n = layout.total_dim();
    let g = DMatrix::from_fn(n, rank.max(1), |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.unscale(tr), layout)
}

/// Probability vector of length `n` (flat Dirichlet).
pub fn random_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n)
        .map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0).ln())
        .collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}
