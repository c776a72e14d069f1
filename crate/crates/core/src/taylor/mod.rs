//! Taylor-in-time jets `a_j = L^j a_0` for linear parabolic equations,
//! growth certificates `‖a_j‖ ≤ A^{j+1} j^j`, series evaluation, and the
//! backward-solvability gate.

mod gate;
mod growth;
mod jet;
mod series;

pub use gate::{backward_gate, GateVerdict, GATE_TOLERANCE};
pub use growth::{fit_growth, fit_growth_log_norms, fit_growth_norms, GrowthCertificate, MIN_JET_LEN};
pub use jet::{iterate, iterate_directed, Direction, TaylorJet, RESOLUTION_THRESHOLD};
pub use series::{evaluate_series, propagate, Propagation, SeriesValue};

use thiserror::Error;

use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TaylorError {
    #[error("datum is under-resolved: {fraction:.3e} of its energy sits above the 2/3 cutoff")]
    Unresolved { fraction: f64 },
    #[error("a jet needs at least {min} coefficients, got {got}")]
    JetTooShort { min: usize, got: usize },
    #[error("|t - t0| = {offset} is outside the certified radius {radius}")]
    OutsideRadius { offset: f64, radius: f64 },
    #[error("tail bound {best:.3e} with {available} terms cannot reach tolerance {tol:.3e}")]
    ToleranceUnreachable { tol: f64, best: f64, available: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
