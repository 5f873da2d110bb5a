//! Dense complex linear algebra over multi-qudit Hilbert spaces.

mod density;
mod distance;
mod ket;
mod layout;
mod measure;
mod operator;
mod schmidt;
pub mod spectral;
pub mod states;
pub(crate) mod subsystem;

pub use density::DensityMatrix;
pub use distance::trace_distance;
pub use ket::Ket;
pub use layout::{Label, SubsystemLayout};
pub use measure::{orthonormality_defect, projective_measure, MeasurementBranch};
pub use operator::Operator;
pub use schmidt::{schmidt_decomposition, schmidt_spectrum, Schmidt};
pub use states::{fourier_basis, fourier_ket};
pub use subsystem::{apply_local, apply_operator, partial_trace, reorder};


/// Kronecker product; the left operand is the most significant factor.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}
