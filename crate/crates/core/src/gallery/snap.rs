use serde::{Deserialize, Serialize};

use super::GalleryError;
use crate::numerics::{fd_weights, linspace};

fn check_p(p_num: u32, p_den: u32) -> Result<f64, GalleryError> {
    if p_den == 0 || p_num == 0 || p_num >= p_den {
        return Err(GalleryError::InvalidParameter(format!("p = {p_num}/{p_den} must lie in (0, 1)")));
    }
    Ok(p_num as f64 / p_den as f64)
}

/// `u' = u^p` solution that leaves zero at `t = 1/2`:
/// `((1-p)(t-1/2))^{1/(1-p)}` for `t > 1/2` and `0` before.
pub fn snap_solution(p_num: u32, p_den: u32, t: f64) -> Result<f64, GalleryError> {
    let p = check_p(p_num, p_den)?;
    Ok(snap(p, t))
}

fn snap(p: f64, t: f64) -> f64 {
    if t <= 0.5 {
        0.0
    } else {
        ((1.0 - p) * (t - 0.5)).powf(1.0 / (1.0 - p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneSided {
    pub order: usize,
    pub left: f64,
    pub right: f64,
    /// Right value at a quarter of the step, to tell a finite jump from
    /// an estimate that is still converging to zero.
    pub right_fine: f64,
    pub mismatch: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub p: (u32, u32),
    pub step: f64,
    pub orders: Vec<OneSided>,
    pub first_mismatch: Option<usize>,
    /// `max |u' - u^p|` on `(0.6, 1)`, with `u'` from an eighth-order central
    /// difference.
    pub ode_residual: f64,
}

/// Agreement threshold for one-sided derivatives.
pub const PROBE_TOLERANCE: f64 = 1e-6;

/// Compares left and right one-sided finite-difference derivatives at the
/// seam `t = 1/2`, up to order `⌈1/(1-p)⌉ + 1`.
pub fn analyticity_probe(p_num: u32, p_den: u32, step: f64) -> Result<ProbeReport, GalleryError> {
    let p = check_p(p_num, p_den)?;
    let top = (1.0 / (1.0 - p)).ceil() as usize + 1;
    let one_sided = |order: usize, h: f64, dir: f64| {
        let nodes: Vec<f64> = (0..order + 5).map(|j| 0.5 + dir * j as f64 * h).collect();
        let w = fd_weights(0.5, &nodes, order);
        w.iter().zip(&nodes).map(|(w, t)| w * snap(p, *t)).sum::<f64>()
    };
    let mut orders = Vec::with_capacity(top + 1);
    for order in 0..=top {
        let left = one_sided(order, step, -1.0);
        let right = one_sided(order, step, 1.0);
        let right_fine = one_sided(order, step / 4.0, 1.0);
        let gap = (right - left).abs();
        let gap_fine = (right_fine - left).abs();
        let vanishing = gap_fine < 0.5 * gap;
        orders.push(OneSided {
            order,
            left,
            right,
            right_fine,
            mismatch: gap > PROBE_TOLERANCE && gap_fine > PROBE_TOLERANCE && !vanishing,
        });
    }
    let first_mismatch = orders.iter().find(|o| o.mismatch).map(|o| o.order);

    let h = 1e-3;
    let stencil: Vec<f64> = (-4..=4).map(|j| j as f64 * h).collect();
    let w = fd_weights(0.0, &stencil, 1);
    let ode_residual = linspace(0.6, 1.0, 41)
        .into_iter()
        .skip(1)
        .take(39)
        .map(|t| {
            let du: f64 = w.iter().zip(&stencil).map(|(w, s)| w * snap(p, t + s)).sum();
            (du - snap(p, t).powf(p)).abs()
        })
        .fold(0.0, f64::max);

    Ok(ProbeReport { p: (p_num, p_den), step, orders, first_mismatch, ode_residual })
}
