use serde::{Deserialize, Serialize};

use super::{TaylorError, TaylorJet};
use crate::numerics::{linear_fit, ln_factorial};

/// Fewest jet coefficients a growth fit will accept.
pub const MIN_JET_LEN: usize = 8;

/// Fitted bound `‖a_j‖ ≤ e^b A^{j+1} j^j` and the Stirling radius
/// `1/(e A)` it certifies.
///
/// `fitted_a` is `None` when the norms decay faster than any `C^j j!` over
/// the window: the series is then treated as entire and `radius` is `+∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    #[serde(rename = "fitted_A")]
    pub fitted_a: Option<f64>,
    /// Intercept `b` of the fit.
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub log_prefactor: f64,
    #[serde(with = "crate::serde_ext::extended_f64")]
    pub radius: f64,
    /// Inclusive index range `[lo, hi]` used for the fit.
    pub fit_window: (usize, usize),
    /// `y_j - (ℓ (j+1) + b)` over the window, where `y_j = ln‖a_j‖ - j ln j`.
    pub residuals: Vec<f64>,
    /// Every norm in the window is zero.
    pub degenerate: bool,
}

impl GrowthCertificate {
    pub fn is_entire(&self) -> bool {
        self.radius == f64::INFINITY
    }

    /// Prefactor `e^b` enlarged by the worst positive residual, so the bound
    /// envelopes every norm in the window.
    pub fn envelope_prefactor(&self) -> f64 {
        let worst = self.residuals.iter().fold(0.0f64, |m, r| m.max(*r));
        (self.log_prefactor + worst).exp()
    }
}

fn window(len: usize) -> (usize, usize) {
    let hi = len - 1;
    (hi.div_ceil(2).max(2), hi)
}

pub fn fit_growth(jet: &TaylorJet) -> Result<GrowthCertificate, TaylorError> {
    fit_growth_norms(jet.norms())
}

pub fn fit_growth_norms(norms: &[f64]) -> Result<GrowthCertificate, TaylorError> {
    if norms.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(TaylorError::InvalidArgument("norms must be finite and non-negative".into()));
    }
    let logs: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    fit_growth_log_norms(&logs)
}

/// Same fit from `ln‖a_j‖` (`-∞` for a zero coefficient), for jets whose
/// norms overflow `f64`.
pub fn fit_growth_log_norms(log_norms: &[f64]) -> Result<GrowthCertificate, TaylorError> {
    if log_norms.len() < MIN_JET_LEN {
        return Err(TaylorError::JetTooShort { min: MIN_JET_LEN, got: log_norms.len() });
    }
    if log_norms.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(TaylorError::InvalidArgument("log-norms must be below +inf".into()));
    }
    let (lo, hi) = window(log_norms.len());
    let idx: Vec<usize> = (lo..=hi).filter(|&j| log_norms[j] > f64::NEG_INFINITY).collect();
    if idx.len() < 2 {
        return Ok(GrowthCertificate {
            fitted_a: Some(0.0),
            log_prefactor: f64::NEG_INFINITY,
            radius: f64::INFINITY,
            fit_window: (lo, hi),
            residuals: Vec::new(),
            degenerate: idx.is_empty(),
        });
    }

    let xs: Vec<f64> = idx.iter().map(|&j| (j + 1) as f64).collect();
    let ys: Vec<f64> = idx.iter().map(|&j| log_norms[j] - j as f64 * (j as f64).ln()).collect();
    let (slope, intercept) = linear_fit(&xs, &ys);
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - (slope * x + intercept)).collect();

    if super_decaying(log_norms, &idx) {
        return Ok(GrowthCertificate {
            fitted_a: None,
            log_prefactor: intercept,
            radius: f64::INFINITY,
            fit_window: (lo, hi),
            residuals,
            degenerate: false,
        });
    }

    let a = slope.exp();
    Ok(GrowthCertificate {
        fitted_a: Some(a),
        log_prefactor: intercept,
        radius: 1.0 / (std::f64::consts::E * a),
        fit_window: (lo, hi),
        residuals,
        degenerate: false,
    })
}

/// Ratio test on `ln(‖a_j‖ / j!)`: consecutive slopes below `-1` and
/// non-increasing across the window.
fn super_decaying(log_norms: &[f64], idx: &[usize]) -> bool {
    let contiguous = idx.windows(2).all(|w| w[1] == w[0] + 1);
    if !contiguous || idx.len() < 3 {
        return false;
    }
    let s: Vec<f64> = idx.iter().map(|&j| log_norms[j] - ln_factorial(j)).collect();
    let slopes: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
    slopes.iter().all(|d| *d < -1.0) && slopes.windows(2).all(|w| w[1] <= w[0] + 1e-9)
}
