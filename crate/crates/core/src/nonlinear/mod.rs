//! The semilinear heat equation `u_t - Δu = u^p` with integer `p`: an
//! integrating-factor spectral stepper, the exact time-derivative jet at a
//! snapshot, Taylor prediction from that jet, and an empirical fit of the
//! constant `N` in `‖∂_t^n(t^n u)‖_∞ ≤ N^{n-1/2} n^{n-2/3}`.

mod fit;
mod jet;
mod solver;

pub use fit::{dz_fit, DzFit, DzMargin, MIN_FIT_ORDER};
pub use jet::{
    power_time_derivative, taylor_predict, time_jet, weighted_norm_field, TimeJet, TimeJetSummary, ALIAS_THRESHOLD,
    MAX_JET_ORDER,
};
pub use solver::{
    convergence_order, step_solver, ConvergenceStudy, InitialData, NonlinearRun, RunManifest, Snapshot, BLOWUP_GUARD,
    DEFAULT_DT, GROWTH_GUARD,
};

use thiserror::Error;

use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NonlinearError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("initial datum is under-resolved: {fraction:.3e} of its energy sits above the 2/3 cutoff")]
    Unresolved { fraction: f64 },
    #[error("blowup guard tripped at t = {time}: sup |u| = {sup}")]
    BlowUp { time: f64, sup: f64 },
    #[error("instability at t = {time}: sup norm grew by a factor {growth} in one step")]
    Unstable { time: f64, growth: f64 },
    #[error("t = {0} is not a stored snapshot time")]
    NotASnapshot(f64),
    #[error("aliasing guard tripped at derivative order {order}: tail energy fraction {fraction:.3e}")]
    Aliased { order: usize, fraction: f64 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
