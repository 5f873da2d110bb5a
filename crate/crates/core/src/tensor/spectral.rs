//! Hermitian eigen-decomposition and matrix functions built on it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const EIGEN_MAX_ITER: usize = 10_000;

/// Eigenvalues (descending) and matching eigenvectors (columns) of a Hermitian matrix.
///
/// Only the Hermitian part `(m + m†)/2` is decomposed.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let h = hermitian_part(m);
    let n = h.nrows();
    // the complex path can also return NaN on very sparse inputs
    let finite = |e: &nalgebra::SymmetricEigen<Complex64, nalgebra::Dyn>| {
        e.eigenvalues.iter().all(|v| v.is_finite()) && e.eigenvectors.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    };
    match nalgebra::SymmetricEigen::try_new(h.clone(), f64::EPSILON, EIGEN_MAX_ITER).filter(finite) {
        Some(eig) => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
            let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
            let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
            (values, vectors)
        }
        None => embedded_eigen(&h),
    }
}

/// Eigen-decomposition through the real symmetric matrix `[[Re, −Im], [Im, Re]]`,
/// whose spectrum is that of `h` with every eigenvalue doubled.
fn embedded_eigen(h: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = h.nrows();
    let real = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let eig = nalgebra::SymmetricEigen::try_new(real, 1e-14, 10 * EIGEN_MAX_ITER)
        .expect("real symmetric eigen-decomposition did not converge");
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    for &k in &order {
        if values.len() == n {
            break;
        }
        let col = eig.eigenvectors.column(k);
        let mut z = DVector::from_fn(n, |r, _| Complex64::new(col[r], col[r + n]));
        for j in 0..values.len() {
            let p = vectors.column(j).dotc(&z);
            z -= vectors.column(j) * p;
        }
        let norm = z.norm();
        if norm > 0.5 {
            vectors.column_mut(values.len()).copy_from(&z.unscale(norm));
            values.push(eig.eigenvalues[k]);
        }
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    hermitian_eigen(m).0
}

pub fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entry-wise deviation from hermiticity.
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Square root of a positive semidefinite matrix; negative eigenvalues are clipped to zero.
pub fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (vals, vecs) = hermitian_eigen(m);
    let roots = DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    );
    &vecs * DMatrix::from_diagonal(&roots) * vecs.adjoint()
}

// nalgebra's complex SVD can stall on some exactly-degenerate inputs, so it
// runs with an iteration cap and falls back to the Gram matrix.
const SVD_MAX_ITER: usize = 10_000;

/// Thin SVD `m = U diag(s) V†` with `s` descending. Returns `(U, s, V†)`.
pub fn svd(m: &DMatrix<Complex64>) -> (DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>) {
    let k = m.nrows().min(m.ncols());
    if let Some(d) = m.clone().try_svd(true, true, f64::EPSILON, SVD_MAX_ITER) {
        if let (Some(u), Some(v_t)) = (d.u.filter(all_finite), d.v_t.filter(all_finite)) {
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&a, &b| d.singular_values[b].total_cmp(&d.singular_values[a]));
            let s = order.iter().map(|&i| d.singular_values[i]).collect();
            let u = DMatrix::from_fn(m.nrows(), k, |r, c| u[(r, order[c])]);
            let v_t = DMatrix::from_fn(k, m.ncols(), |r, c| v_t[(order[r], c)]);
            return (u, s, v_t);
        }
    }
    gram_svd(m)
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = match m.clone().try_svd(false, false, f64::EPSILON, SVD_MAX_ITER) {
        Some(d) if d.singular_values.iter().all(|v| v.is_finite()) => d.singular_values.iter().copied().collect(),
        _ => gram_svd(m).1,
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn all_finite(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn gram_svd(m: &DMatrix<Complex64>) -> (DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>) {
    let wide = m.nrows() <= m.ncols();
    let a = if wide { m.clone() } else { m.adjoint() };
    let k = a.nrows();
    let (vals, u) = hermitian_eigen(&(&a * a.adjoint()));
    let s: Vec<f64> = vals.iter().map(|v| v.max(0.0).sqrt()).collect();
    let top = s.first().copied().unwrap_or(0.0);
    // rows of V† from a† u / s; near-null directions are completed orthonormally
    let mut v_t = DMatrix::<Complex64>::zeros(k, a.ncols());
    let mut filled = 0;
    for (j, &sj) in s.iter().enumerate() {
        if sj > 1e-12 * top.max(f64::MIN_POSITIVE) {
            let row = (a.adjoint() * u.column(j)).unscale(sj).adjoint();
            v_t.row_mut(j).copy_from(&row);
            filled += 1;
        }
    }
    for j in filled..k {
        let mut e = 0;
        loop {
            let mut cand = nalgebra::RowDVector::<Complex64>::zeros(a.ncols());
            cand[e] = Complex64::new(1.0, 0.0);
            for r in 0..j {
                let proj = (cand.clone() * v_t.row(r).adjoint())[(0, 0)];
                cand -= v_t.row(r) * proj;
            }
            let n = cand.norm();
            if n > 1e-6 {
                v_t.row_mut(j).copy_from(&cand.unscale(n));
                break;
            }
            e += 1;
        }
    }
    if wide {
        (u, s, v_t)
    } else {
        (v_t.adjoint(), s, u.adjoint())
    }
}

/// Trace norm of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m).iter().map(|v| v.abs()).sum()
}
