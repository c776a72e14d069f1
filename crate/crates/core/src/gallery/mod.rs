//! Explicit solutions and counterexamples, each with a residual check:
//! Hermite eigen-iteration, the inverse-square steady state, a Tychonov-type
//! non-uniqueness series for the biharmonic heat equation, and a
//! non-analytic solution of `u' = u^p`.

mod explicit;
mod laurent;
mod snap;
mod tychonov;

use std::collections::BTreeMap;

pub use explicit::{
    hermite_eigen_residual, inverse_square_residual, EigenResidual, InverseSquareSpec, HERMITE_TRUNCATION,
};
pub use laurent::LaurentPoly;
pub use snap::{analyticity_probe, snap_solution, OneSided, ProbeReport, PROBE_TOLERANCE};
pub use tychonov::{
    required_truncation, tychonov_decay, tychonov_derivative_bound, tychonov_eval, tychonov_g_derivative,
    tychonov_g_derivatives, tychonov_r_value, DerivativeBound, TychonovParams, TychonovSeries, TychonovValue,
    TRUNCATION_TOLERANCE,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GalleryError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("n = {n}, k = {k} leaves no margin in a basis of size {truncation}")]
    TruncationMargin { n: usize, k: u32, truncation: usize },
    #[error("series truncated at K = {truncation} has not converged at x = {x}, t = {t}")]
    NonConvergent { x: f64, t: f64, truncation: usize },
}

/// One gallery entry as written to the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryReport {
    pub example: String,
    pub params: BTreeMap<String, f64>,
    pub residual: f64,
    pub bound_constants: BTreeMap<String, f64>,
    pub pass: bool,
}
