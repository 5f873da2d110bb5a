pub mod channel;
pub mod cli;
pub mod control;
pub mod error;
pub mod metrics;
pub mod numeric;
pub mod protocols;
pub mod sampling;
pub mod tensor;

pub use error::{Error, Result};
