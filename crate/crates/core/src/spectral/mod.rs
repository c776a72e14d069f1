//! Periodic 1-D Fourier discretisation and the spatial operators `Δ`, `-Δ²`
//! and `Δ - V`, plus a Hermite-function basis for `V = x²`.

mod field;
mod grid;
mod hermite;
mod operator;

pub use field::{Field, FieldRecord, GridRecord};
pub use grid::Grid;
pub use hermite::{hermite_apply_schrodinger, hermite_functions, physicists_hermite, HermiteBasis};
pub use operator::OperatorSpec;

use thiserror::Error;

/// Relative size below which a Fourier coefficient is indistinguishable
/// from FFT round-off (about 64 ulp of the largest coefficient).
pub const NOISE_FLOOR: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("grid size must be a power of two >= 8, got {0}")]
    BadGridSize(usize),
    #[error("grid length must be positive and finite, got {0}")]
    BadLength(f64),
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("Hermite coefficient index {index} exceeds truncation {truncation}")]
    HermiteTruncation { index: usize, truncation: usize },
}
