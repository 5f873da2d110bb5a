use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} = {value} is out of range (must be < {bound})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("empty side of a bipartition")]
    EmptyCut,

    #[error("basis is not orthonormal (max deviation {max_overlap:.3e})")]
    NonOrthonormalBasis { max_overlap: f64 },

    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("amplitudes are not normalized (sum of squares {0})")]
    InvalidAmplitudes(f64),

    #[error("resource guard: dimension {dim} exceeds maximum {max}")]
    ResourceGuard { dim: usize, max: usize },

    #[error("invalid probability distribution: {0}")]
    InvalidPmf(String),

    #[error("invalid Schmidt spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
