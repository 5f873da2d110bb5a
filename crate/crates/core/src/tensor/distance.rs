use super::density::DensityMatrix;
use super::spectral::trace_norm_hermitian;
use crate::error::{Error, Result};

/// `(1/2) ‖rho − sigma‖₁`, clamped to `[0, 1]`. Layouts may differ; only
/// the dimensions must agree.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let diff = rho.matrix() - sigma.matrix();
    Ok((0.5 * trace_norm_hermitian(&diff)).clamp(0.0, 1.0))
}
