use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::derivative::{combine, compositions, one_dim_derivatives};
use super::{check_dimension, KernelError};
use crate::numerics::{linear_fit, linspace, logspace};

pub const C5_DEFAULT: f64 = 0.125;
/// Admissible Gaussian exponents are `0 < C₅ ≤ 1/4 - C5_MARGIN`.
pub const C5_MARGIN: f64 = 1e-3;

/// Sampling grid: `rho = r/√t` uniform on `[0, rho_max]`, `t` log-spaced on
/// `[t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub rho_max: f64,
    pub rho_points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self { rho_max: 24.0, rho_points: 961, t_min: 1e-3, t_max: 1.0, t_points: 13 }
    }
}

impl ScanSpec {
    fn validate(&self) -> Result<(), KernelError> {
        let ok = self.rho_max > 0.0
            && self.rho_points >= 3
            && self.t_min > 0.0
            && self.t_max >= self.t_min
            && self.t_points >= 1;
        if ok {
            Ok(())
        } else {
            Err(KernelError::BadScan(format!("{self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelBoundReport {
    pub d: usize,
    #[serde(rename = "C5")]
    pub c5: f64,
    pub k_max: usize,
    pub sup_ratio: Vec<f64>,
    /// `(rho, t)` where each supremum was attained.
    pub argmax: Vec<(f64, f64)>,
    #[serde(rename = "C1_k")]
    pub c1_k: Vec<f64>,
    #[serde(rename = "global_C1")]
    pub global_c1: f64,
    /// The ratio falls between the last two `rho` samples at every `t`.
    pub boundary_decreasing: Vec<bool>,
    pub scan: ScanSpec,
}

impl KernelBoundReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,sup_ratio,C1_k\n");
        for (k, (r, c)) in self.sup_ratio.iter().zip(&self.c1_k).enumerate() {
            let _ = writeln!(s, "{k},{r},{c}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub passed: bool,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C5")]
    pub c5: f64,
    /// Least-squares slope of `ln C1(k)` over the top half of `k`.
    pub top_half_slope: f64,
    pub bound_holds: bool,
    pub boundary_decreasing: bool,
}

/// Largest slope of `ln C1(k)` against `k` that still certifies.
pub const SLOPE_TOLERANCE: f64 = 0.05;

/// `|B(x, √t)| = ω_d t^{d/2}`.
pub fn ball_volume(d: usize, t: f64) -> f64 {
    let omega = match d {
        1 => 2.0,
        2 => PI,
        _ => 4.0 * PI / 3.0,
    };
    omega * t.powf(d as f64 / 2.0)
}

/// `k^{k - 2/3}`, with the value 1 at `k = 0`.
pub fn k_power(k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        (k as f64).powf(k as f64 - 2.0 / 3.0)
    }
}

pub fn scan_minimal_constants(
    d: usize,
    k_max: usize,
    c5: f64,
    scan: &ScanSpec,
) -> Result<KernelBoundReport, KernelError> {
    check_dimension(d)?;
    if !(c5 > 0.0 && c5 <= 0.25 - C5_MARGIN) {
        return Err(KernelError::C5OutOfRange(c5));
    }
    scan.validate()?;
    let rhos = linspace(0.0, scan.rho_max, scan.rho_points);
    let ts = logspace(scan.t_min, scan.t_max, scan.t_points);
    let comps: Vec<_> = (0..=k_max).map(|k| compositions(k, d)).collect();
    let norms: Vec<f64> = (0..=k_max).map(k_power).collect();

    // ratios[t][rho][k]
    let ratios: Vec<Vec<Vec<f64>>> = ts
        .par_iter()
        .map(|&t| {
            let axis0 = one_dim_derivatives(0.0, t, k_max);
            rhos.iter()
                .map(|&rho| {
                    let r = rho * t.sqrt();
                    let mut tables = vec![axis0.clone(); d];
                    tables[0] = one_dim_derivatives(r, t, k_max);
                    let weight = ball_volume(d, t) * (c5 * rho * rho).exp();
                    (0..=k_max)
                        .map(|k| combine(&tables, &comps[k]).abs() * t.powi(k as i32) * weight / norms[k])
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut sup_ratio = vec![0.0f64; k_max + 1];
    let mut argmax = vec![(0.0, ts[0]); k_max + 1];
    let mut boundary_decreasing = vec![true; k_max + 1];
    let last = rhos.len() - 1;
    for (ti, per_t) in ratios.iter().enumerate() {
        for (ri, per_r) in per_t.iter().enumerate() {
            for (k, &v) in per_r.iter().enumerate() {
                if v > sup_ratio[k] {
                    sup_ratio[k] = v;
                    argmax[k] = (rhos[ri], ts[ti]);
                }
            }
        }
        for k in 0..=k_max {
            if per_t[last][k] > per_t[last - 1][k] {
                boundary_decreasing[k] = false;
            }
        }
    }
    let c1_k: Vec<f64> = sup_ratio.iter().enumerate().map(|(k, s)| s.powf(1.0 / (k as f64 + 1.0))).collect();
    let global_c1 = c1_k.iter().fold(0.0f64, |m, c| m.max(*c));
    Ok(KernelBoundReport { d, c5, k_max, sup_ratio, argmax, c1_k, global_c1, boundary_decreasing, scan: *scan })
}

pub fn certify(report: &KernelBoundReport) -> Certification {
    let c1 = report.c1_k.iter().fold(0.0f64, |m, c| m.max(*c));
    let bound_holds =
        report.sup_ratio.iter().enumerate().all(|(k, s)| s.is_finite() && *s <= c1.powi(k as i32 + 1) * (1.0 + 1e-12));
    let lo = report.k_max.div_ceil(2);
    let ks: Vec<f64> = (lo..=report.k_max).map(|k| k as f64).collect();
    let logs: Vec<f64> = (lo..=report.k_max).map(|k| report.c1_k[k].ln()).collect();
    let top_half_slope = if ks.len() >= 2 { linear_fit(&ks, &logs).0 } else { 0.0 };
    let boundary_decreasing = report.boundary_decreasing.iter().all(|b| *b);
    Certification {
        passed: bound_holds && boundary_decreasing && top_half_slope <= SLOPE_TOLERANCE,
        c1,
        c5: report.c5,
        top_half_slope,
        bound_holds,
        boundary_decreasing,
    }
}
