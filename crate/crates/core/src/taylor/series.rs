use serde::{Deserialize, Serialize};

use super::growth::{fit_growth, GrowthCertificate};
use super::{iterate, TaylorError, TaylorJet};
use crate::spectral::{Field, OperatorSpec};

/// Partial sum of a jet at one time, with its certified tail bound.
#[derive(Debug, Clone)]
pub struct SeriesValue {
    pub field: Field,
    pub tail_bound: f64,
    pub terms_used: usize,
    pub certificate: GrowthCertificate,
}

/// Sup-norms of the individual terms `‖a_j‖ |s|^j / j!`.
fn term_norms(norms: &[f64], s: f64) -> Vec<f64> {
    let mut w = 1.0;
    norms
        .iter()
        .enumerate()
        .map(|(j, n)| {
            if j > 0 {
                w *= s.abs() / j as f64;
            }
            n * w
        })
        .collect()
}

/// Bound on `Σ_{j > cut} ‖a_j‖ |s|^j / j!`, or `None` if the certificate
/// says nothing at this truncation.
fn tail_after(cert: &GrowthCertificate, norms: &[f64], terms: &[f64], s: f64, cut: usize) -> Option<f64> {
    // L is linear, so one vanishing coefficient kills the rest of the jet
    if let Some(z) = norms.iter().position(|v| *v == 0.0) {
        if z <= cut + 1 {
            return Some(0.0);
        }
    }
    let (lo, hi) = cert.fit_window;
    if cut + 1 < lo || cut > hi {
        return None;
    }
    if let Some(a) = cert.fitted_a.filter(|_| !cert.is_entire()) {
        let q = std::f64::consts::E * a * s.abs();
        if q >= 1.0 {
            return None;
        }
        let m = (cut + 1) as f64;
        let bound = cert.envelope_prefactor() * a * q.powf(m) / ((1.0 - q) * (2.0 * std::f64::consts::PI * m).sqrt());
        return Some(bound);
    }
    // entire: term ratios are non-increasing across the window
    if cut < lo + 1 || terms[cut - 1] == 0.0 {
        return None;
    }
    let rho = terms[cut] / terms[cut - 1];
    (rho < 1.0).then(|| terms[cut] * rho / (1.0 - rho))
}

pub fn evaluate_series(jet: &TaylorJet, t: f64, tol: f64) -> Result<SeriesValue, TaylorError> {
    if !(tol > 0.0) {
        return Err(TaylorError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let cert = fit_growth(jet)?;
    let s = jet.direction().sign() * (t - jet.base_time());
    let a = jet.coefficients();
    if s == 0.0 {
        return Ok(SeriesValue { field: a[0].clone(), tail_bound: 0.0, terms_used: 1, certificate: cert });
    }
    if s.abs() >= cert.radius {
        return Err(TaylorError::OutsideRadius { offset: s.abs(), radius: cert.radius });
    }

    let norms = jet.norms();
    let terms = term_norms(norms, s);
    let mut best = f64::INFINITY;
    let mut chosen = None;
    for cut in 0..=jet.order() {
        if let Some(b) = tail_after(&cert, norms, &terms, s, cut) {
            best = best.min(b);
            if b < tol {
                chosen = Some((cut, b));
                break;
            }
        }
    }
    let Some((cut, tail_bound)) = chosen else {
        return Err(TaylorError::ToleranceUnreachable { tol, best, available: jet.order() + 1 });
    };

    let mut weights = Vec::with_capacity(cut + 1);
    let mut w = 1.0;
    for j in 0..=cut {
        if j > 0 {
            w *= s / j as f64;
        }
        weights.push(w);
    }
    let field = Field::weighted_sum(a[0].grid(), weights.into_iter().zip(a.iter()))?;
    Ok(SeriesValue { field, tail_bound, terms_used: cut + 1, certificate: cert })
}

/// Result of [`propagate`]: the field at the target time after a sequence
/// of re-expanded Taylor steps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Propagation {
    #[serde(skip)]
    pub field: Option<Field>,
    pub steps: Vec<f64>,
    /// Sum of the per-step tail bounds.
    pub tail_bound: f64,
}

const MAX_HALVINGS: usize = 60;

/// Advances `u_t = L u` from `t0` to `t` by Taylor steps of order `order`,
/// re-expanding the jet at each step and halving the step until the
/// certified tail falls below the step's share of `tol`.
pub fn propagate(
    op: &OperatorSpec,
    a0: &Field,
    t0: f64,
    t: f64,
    order: usize,
    tol: f64,
) -> Result<Propagation, TaylorError> {
    if !(tol > 0.0) {
        return Err(TaylorError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let total = t - t0;
    let mut state = a0.clone();
    let mut now = t0;
    let mut steps = Vec::new();
    let mut tail_bound = 0.0;
    let mut h = total;
    while now != t {
        let remaining = t - now;
        if h.abs() > remaining.abs() {
            h = remaining;
        }
        let jet = iterate(op, &state, order)?;
        let mut tries = 0;
        let value = loop {
            let target = if h == remaining { t } else { now + h };
            let share = tol * (h.abs() / total.abs());
            match evaluate_series(&shift_base(&jet, now), target, share) {
                Ok(v) => break v,
                Err(TaylorError::OutsideRadius { .. } | TaylorError::ToleranceUnreachable { .. })
                    if tries < MAX_HALVINGS =>
                {
                    h *= 0.5;
                    tries += 1;
                }
                Err(e) => return Err(e),
            }
        };
        let step = if h == remaining { t - now } else { h };
        now = if h == remaining { t } else { now + h };
        steps.push(step);
        tail_bound += value.tail_bound;
        state = value.field;
    }
    Ok(Propagation { field: Some(state), steps, tail_bound })
}

fn shift_base(jet: &TaylorJet, base: f64) -> TaylorJet {
    let mut j = jet.clone();
    j.set_base_time(base);
    j
}
