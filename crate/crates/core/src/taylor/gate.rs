use serde::{Deserialize, Serialize};

use super::{evaluate_series, fit_growth, iterate_directed, Direction, TaylorError};
use crate::spectral::{Field, OperatorSpec};

/// Tolerance for the series reconstruction of `u(·, -horizon)`.
pub const GATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateVerdict {
    pub solvable: bool,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub certified_radius: f64,
    pub requested_horizon: f64,
    #[serde(rename = "fitted_A")]
    pub fitted_a: Option<f64>,
    pub fit_window: (usize, usize),
    pub reconstruction_error: Option<f64>,
    /// Tail bound of the reconstruction, when one was computed.
    pub reconstruction_tail: Option<f64>,
    /// A discretised datum is a trigonometric polynomial and so genuinely
    /// entire; a negative verdict holds only at this resolution and `J`.
    pub resolution_qualified: bool,
}

/// Decides whether `u_t = L u` can be run backward from `a` for time
/// `horizon`, by certifying the radius of the backward jet.
///
/// `reference` is the known value of `u(·, -horizon)`, if any; it only
/// feeds `reconstruction_error`.
pub fn backward_gate(
    op: &OperatorSpec,
    a: &Field,
    horizon: f64,
    order: usize,
    reference: Option<&Field>,
) -> Result<(GateVerdict, Option<Field>), TaylorError> {
    if !(horizon > 0.0) {
        return Err(TaylorError::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    let jet = iterate_directed(op, a, order, Direction::Backward, 0.0)?;
    let cert = fit_growth(&jet)?;
    let solvable = cert.radius > horizon;
    let mut verdict = GateVerdict {
        solvable,
        certified_radius: cert.radius,
        requested_horizon: horizon,
        fitted_a: cert.fitted_a,
        fit_window: cert.fit_window,
        reconstruction_error: None,
        reconstruction_tail: None,
        resolution_qualified: !solvable,
    };
    if !solvable {
        return Ok((verdict, None));
    }
    match evaluate_series(&jet, -horizon, GATE_TOLERANCE) {
        Ok(v) => {
            verdict.reconstruction_tail = Some(v.tail_bound);
            if let Some(r) = reference {
                verdict.reconstruction_error = Some(v.field.max_abs_diff(r)?);
            }
            Ok((verdict, Some(v.field)))
        }
        Err(TaylorError::ToleranceUnreachable { .. }) => Ok((verdict, None)),
        Err(e) => Err(e),
    }
}
