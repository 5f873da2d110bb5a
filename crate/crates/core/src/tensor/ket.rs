use nalgebra::DVector;
use num_complex::Complex64;

use super::operator::Operator;
use super::Tensor;
use crate::error::{Error, Result};
use crate::numeric::policy;

/// A state vector. Normalized unless built with [`Ket::unnormalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: DVector<Complex64>,
}

impl Ket {
    /// Checked constructor: the Euclidean norm must be 1 within the structural tolerance.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension("empty ket".into()));
        }
        let k = Self::unnormalized(amps);
        let n = k.norm();
        if (n - 1.0).abs() > policy().structural_tol {
            return Err(Error::NotNormalized(n));
        }
        Ok(k)
    }

    pub fn unnormalized(amps: Vec<Complex64>) -> Self {
        Self {
            amps: DVector::from_vec(amps),
        }
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let k = Self::unnormalized(amps);
        let n = k.norm();
        if k.dim() == 0 || n < policy().structural_tol {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self {
            amps: k.amps.unscale(n),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn from_vector(amps: DVector<Complex64>) -> Self {
        Self { amps }
    }

    /// Computational basis ket `|index>` in dimension `d`.
    pub fn basis(d: usize, index: usize) -> Result<Self> {
        if index >= d {
            return Err(Error::OutOfRange {
                what: "basis index",
                value: index,
                bound: d,
            });
        }
        let mut amps = DVector::zeros(d);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.amps.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    pub fn scaled(&self, c: Complex64) -> Ket {
        Ket {
            amps: &self.amps * c,
        }
    }

    /// `|self><self|`.
    pub fn projector(&self) -> Operator {
        Operator::outer(self, self)
    }

    /// Fidelity `|<self|other>|^2`.
    pub fn overlap_sq(&self, other: &Ket) -> f64 {
        self.inner(other).norm_sqr()
    }
}

impl Tensor for Ket {
    fn tensor(&self, other: &Self) -> Self {
        Ket {
            amps: self.amps.kronecker(&other.amps),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_kets_tensor_to_basis_kets() {
        let k = Ket::basis(2, 0).unwrap().tensor(&Ket::basis(2, 1).unwrap());
        assert_eq!(k, Ket::basis(4, 1).unwrap());
    }

    #[test]
    fn uniform_superposition_tensor() {
        let h = 1.0 / 2f64.sqrt();
        let plus = Ket::from_real(&[h, h]).unwrap();
        let k = plus.tensor(&plus);
        for a in k.as_slice() {
            assert!((a - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn checked_constructor_rejects_unnormalized() {
        assert!(matches!(
            Ket::from_real(&[1.0, 1.0]),
            Err(Error::NotNormalized(_))
        ));
        assert!(Ket::normalized(vec![Complex64::new(0.0, 0.0); 3]).is_err());
        assert!(Ket::basis(2, 2).is_err());
    }
}
