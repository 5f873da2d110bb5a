use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ket::Ket;
use super::Tensor;
use crate::error::{Error, Result};

/// Dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    m: DMatrix<Complex64>,
}

impl Operator {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Self {
        Self { m }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(rows: usize, cols: usize, f: F) -> Self {
        Self {
            m: DMatrix::from_fn(rows, cols, f),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            m: DMatrix::zeros(rows, cols),
        }
    }

    /// `|ket><bra|`.
    pub fn outer(ket: &Ket, bra: &Ket) -> Self {
        Self {
            m: ket.amplitudes() * bra.amplitudes().adjoint(),
        }
    }

    /// `|row><col|` on a `d`-dimensional space.
    pub fn ket_bra(d: usize, row: usize, col: usize) -> Result<Self> {
        if row >= d || col >= d {
            return Err(Error::OutOfRange {
                what: "basis index",
                value: row.max(col),
                bound: d,
            });
        }
        let mut m = DMatrix::zeros(d, d);
        m[(row, col)] = Complex64::new(1.0, 0.0);
        Ok(Self { m })
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        Self {
            m: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries)),
        }
    }

    pub fn rows(&self) -> usize {
        self.m.nrows()
    }

    pub fn cols(&self) -> usize {
        self.m.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { m: &self.m * c }
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_distance(&self, other: &Operator) -> f64 {
        (&self.m - &other.m).norm()
    }

    pub fn apply(&self, k: &Ket) -> Ket {
        Ket::from_vector(&self.m * k.amplitudes())
    }

    /// `max |(U†U - I)_ij|` for square operators.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.cols();
        let g = self.m.adjoint() * &self.m - DMatrix::<Complex64>::identity(n, n);
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Self {
        Self {
            m: self.m.kronecker(&other.m),
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator { m: &self.m * &rhs.m }
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator { m: &self.m + &rhs.m }
    }
}
