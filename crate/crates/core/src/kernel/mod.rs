//! Time derivatives of the Euclidean Gaussian heat kernel in `d ≤ 3`
//! dimensions and an empirical certification of
//! `|∂_t^k Γ| ≤ C₁^{k+1} k^{k-2/3} t^{-k} |B(x,√t)|^{-1} e^{-C₅ r²/t}`.

mod derivative;
mod oracle;
mod scan;

pub use derivative::{heat_kernel, kernel_time_derivative, kernel_time_derivative_at, laplacian_of_time_derivative_at};
pub use oracle::{contour_time_derivative, richardson_time_derivative};
pub use scan::{
    ball_volume, certify, k_power, scan_minimal_constants, Certification, KernelBoundReport, ScanSpec, C5_DEFAULT,
    C5_MARGIN, SLOPE_TOLERANCE,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("offset must be a finite non-negative distance, got {0}")]
    BadOffset(f64),
    #[error("dimension must be 1, 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("C5 = {0} is outside (0, 1/4 - margin]")]
    C5OutOfRange(f64),
    #[error("invalid scan grid: {0}")]
    BadScan(String),
}

/// Evaluation point: dimension, distance `r = |x - y|` and time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub d: usize,
    pub r: f64,
    pub t: f64,
}

impl KernelPoint {
    pub fn new(d: usize, r: f64, t: f64) -> Result<Self, KernelError> {
        check_dimension(d)?;
        if !(r >= 0.0 && r.is_finite()) {
            return Err(KernelError::BadOffset(r));
        }
        if !(t > 0.0) {
            return Err(KernelError::NonPositiveTime(t));
        }
        Ok(Self { d, r, t })
    }
}

pub(crate) fn check_dimension(d: usize) -> Result<(), KernelError> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(KernelError::BadDimension(d))
    }
}
