//! Minimal constants in the heat-kernel derivative bound, certified on a
//! scan, with closed-form and contour-integral cross-checks.

use std::f64::consts::PI;

use chronolens_core::kernel::{
    certify, contour_time_derivative, heat_kernel, kernel_time_derivative_at, scan_minimal_constants, KernelError,
    KernelPoint, ScanSpec, C5_DEFAULT,
};
use chronolens_core::numerics::factorial_f64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{cell, num, Metrics, Outcome};
use crate::svg::{Plot, Series, Style};
use crate::CliError;

pub const NAME: &str = "kernel-bounds";

#[derive(Debug, Clone, Default, Serialize, clap::Args)]
pub struct Flags {
    /// Dimension, 1 to 3.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Gaussian exponent in `(0, 1/4)`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c5: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub d: usize,
    pub c5: f64,
    pub k_max: usize,
    pub scan: ScanSpec,
    /// Tolerance on the closed-form `d = 1` suprema.
    pub closed_form_tolerance: f64,
    pub oracle_k_max: usize,
    pub oracle_nodes: usize,
    pub oracle_tolerance: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            d: 1,
            c5: C5_DEFAULT,
            k_max: 16,
            scan: ScanSpec::default(),
            closed_form_tolerance: 1e-3,
            oracle_k_max: 6,
            oracle_nodes: 96,
            oracle_tolerance: 1e-8,
        }
    }
}

/// Largest contour-oracle error over a fixed set of points, scaled by the
/// Cauchy estimate `k! (2/t)^k Γ(0, t)` where the derivative is near a zero.
fn oracle_error(d: usize, k_max: usize, nodes: usize) -> Result<f64, KernelError> {
    let offsets: [&[f64]; 3] = match d {
        1 => [&[0.3], &[1.1], &[2.4]],
        2 => [&[0.3, 0.4], &[1.0, -0.5], &[0.0, 2.0]],
        _ => [&[0.2, 0.3, 0.1], &[0.7, -0.4, 0.9], &[1.5, 0.0, 0.5]],
    };
    let mut worst = 0.0f64;
    for off in offsets {
        for t in [0.5, 1.0] {
            let peak = heat_kernel(KernelPoint::new(d, 0.0, t)?);
            for k in 0..=k_max {
                let exact = kernel_time_derivative_at(off, t, k)?;
                let approx = contour_time_derivative(off, t, k, nodes)?;
                let scale = factorial_f64(k) * (2.0 / t).powi(k as i32) * peak;
                worst = worst.max((approx - exact).abs() / exact.abs().max(1e-6 * scale));
            }
        }
    }
    Ok(worst)
}

pub fn run(p: &Params, seed: u64) -> Result<Outcome, CliError> {
    if p.k_max > 40 || p.oracle_nodes < 8 {
        return Err(CliError::config("kernel-bounds: need k_max <= 40 and oracle_nodes >= 8"));
    }
    let report = scan_minimal_constants(p.d, p.k_max, p.c5, &p.scan).map_err(CliError::config)?;
    let cert = certify(&report);
    let mut m = Metrics::new();
    m.set("report", serde_json::to_value(&report).expect("report serializes"));
    m.set("certification", serde_json::to_value(&cert).expect("certification serializes"));
    m.num("global_C1", report.global_c1);
    m.require("certified", cert.passed);

    if p.d == 1 {
        let s0 = 1.0 / PI.sqrt();
        let e0 = (report.sup_ratio[0] - s0).abs();
        m.set("closed_form_k0", json!({ "expected": s0, "error": num(e0) }));
        m.require("closed_form_k0", e0 < p.closed_form_tolerance);
        if p.k_max >= 1 {
            let beta = 1.0 - 4.0 * p.c5;
            let s1 = f64::max(0.5, (-1.0 - beta / 2.0).exp() / beta) / PI.sqrt();
            let e1 = (report.sup_ratio[1] - s1).abs();
            m.set("closed_form_k1", json!({ "expected": s1, "error": num(e1) }));
            m.require("closed_form_k1", e1 < p.closed_form_tolerance);
        }
    }

    let oracle = oracle_error(p.d, p.oracle_k_max, p.oracle_nodes).map_err(CliError::config)?;
    m.num("oracle_error", oracle);
    m.require("oracle_agrees", oracle < p.oracle_tolerance);

    let mut csv = String::from("k,sup_ratio,C1_k,argmax_rho,argmax_t,boundary_decreasing\n");
    for k in 0..=p.k_max {
        let (rho, t) = report.argmax[k];
        csv.push_str(&format!(
            "{k},{},{},{},{},{}\n",
            cell(report.sup_ratio[k]),
            cell(report.c1_k[k]),
            cell(rho),
            cell(t),
            report.boundary_decreasing[k]
        ));
    }
    let pts: Vec<(f64, f64)> = report.c1_k.iter().enumerate().map(|(k, c)| (k as f64, *c)).collect();
    let flat = vec![(0.0, cert.c1), (p.k_max as f64, cert.c1)];
    let plot = Plot::new(format!("Minimal C1(k), d = {}, C5 = {}", p.d, p.c5), "k", "C1(k)")
        .with(Series::new("C1(k)", pts, Style::Markers))
        .with(Series::new("certified C1", flat, Style::Dashed));

    let mut out = Outcome::new(NAME, seed, p, m);
    out.csv.push(("kernel_constants.csv".into(), csv));
    out.plots.push(("c1_k.svg".into(), plot));
    Ok(out)
}
