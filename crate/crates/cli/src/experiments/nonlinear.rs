//! Semilinear heat equation `u_t = Δu + u^p`: Riccati checks, Taylor
//! prediction against the stepper, the growth fit and self-convergence.

use chronolens_core::nonlinear::{
    convergence_order, dz_fit, step_solver, taylor_predict, time_jet, NonlinearError, TimeJet, DEFAULT_DT,
};
use chronolens_core::spectral::{Field, Grid};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{num, Metrics, Outcome};
use crate::svg::{Plot, Series, Style};
use crate::CliError;

pub const NAME: &str = "nonlinear";

#[derive(Debug, Clone, Default, Serialize, clap::Args)]
pub struct Flags {
    /// Exponents for the sine-data checks, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<u32>>,
    /// Amplitude of the `sin x` initial datum.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub p: Vec<u32>,
    pub amplitude: f64,
    pub dt: f64,
    pub riccati_value: f64,
    pub riccati_tolerance: f64,
    pub taylor_order: usize,
    pub taylor_time: f64,
    pub taylor_tolerance: f64,
    pub cross_t0: f64,
    pub cross_delta: f64,
    pub cross_tolerance: f64,
    pub fit_p: u32,
    pub fit_times: Vec<f64>,
    pub fit_order: usize,
    pub fit_grids: [usize; 2],
    pub fit_ratio_limit: f64,
    pub convergence_dt: f64,
    pub convergence_t: f64,
    pub min_order: f64,
    pub snapshot_stride: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            p: vec![2, 3],
            amplitude: 0.1,
            dt: DEFAULT_DT,
            riccati_value: 0.1,
            riccati_tolerance: 1e-8,
            taylor_order: 12,
            taylor_time: 0.5,
            taylor_tolerance: 1e-10,
            cross_t0: 0.3,
            cross_delta: 0.05,
            cross_tolerance: 1e-7,
            fit_p: 3,
            fit_times: vec![0.25, 0.5, 1.0],
            fit_order: 10,
            fit_grids: [256, 512],
            fit_ratio_limit: 2.0,
            convergence_dt: 0.1,
            convergence_t: 1.0,
            min_order: 3.8,
            snapshot_stride: 50,
        }
    }
}

fn grid(n: usize) -> Result<Grid, CliError> {
    Grid::new(n, std::f64::consts::TAU).map_err(CliError::config)
}

fn checks(p: &Params, m: &mut Metrics, out: &mut Outcome) -> Result<(), NonlinearError> {
    let g = grid(256).map_err(|e| NonlinearError::InvalidArgument(e.to_string()))?;
    let c = p.riccati_value;

    // u' = u² from a constant: u(t) = c / (1 - c t)
    let run = step_solver(2, &Field::from_fn(&g, |_| c), p.dt, 1.0, (0.25 / p.dt).round().max(1.0) as usize)?;
    let exact = c / (1.0 - c);
    let solver_err = run.final_field().values().iter().fold(0.0f64, |e, v| e.max((v - exact).abs()));
    m.num("riccati_solver_error", solver_err);
    m.require("riccati_solver", solver_err < p.riccati_tolerance);

    let jet = time_jet(&run, 0.0, p.taylor_order)?;
    let s = p.taylor_time;
    let exact = c / (1.0 - c * s);
    let taylor_err = taylor_predict(&jet, s).values().iter().fold(0.0f64, |e, v| e.max((v - exact).abs()));
    m.num("riccati_taylor_error", taylor_err);
    m.require("riccati_taylor", taylor_err < p.taylor_tolerance);

    let u0 = Field::from_fn(&g, |x| p.amplitude * x.sin());
    let target = p.cross_t0 + p.cross_delta;
    let mut cross = serde_json::Map::new();
    for &q in &p.p {
        let run = step_solver(q, &u0, p.dt, target, 1)?;
        let jet = time_jet(&run, p.cross_t0, p.taylor_order)?;
        let snap = run.snapshot_at(target).ok_or(NonlinearError::NotASnapshot(target))?;
        let err = taylor_predict(&jet, target).max_abs_diff(&snap.field)?;
        cross.insert(format!("p={q}"), num(err));
        m.require(format!("cross_validation_p{q}"), err < p.cross_tolerance);
    }
    m.set("cross_validation", cross);

    let mut fitted = Vec::new();
    let mut trajectory = None;
    for (i, &n) in p.fit_grids.iter().enumerate() {
        let g = grid(n).map_err(|e| NonlinearError::InvalidArgument(e.to_string()))?;
        let u0 = Field::from_fn(&g, |x| p.amplitude * x.sin());
        let t_end = p.fit_times.iter().cloned().fold(0.0, f64::max);
        let run = step_solver(p.fit_p, &u0, p.dt, t_end, p.snapshot_stride)?;
        let jets: Vec<TimeJet> =
            p.fit_times.iter().map(|&t| time_jet(&run, t, p.fit_order)).collect::<Result<_, _>>()?;
        let fit = dz_fit(&jets)?;
        fitted.push(fit.fitted_n);
        if i == 0 {
            let mut plot = Plot::new(format!("Growth margins, p = {}", p.fit_p), "n", "margin");
            for &t in &p.fit_times {
                let pts = fit.margins.iter().filter(|d| d.base_time == t).map(|d| (d.n as f64, d.margin)).collect();
                plot = plot.with(Series::new(format!("t0 = {t}"), pts, Style::Line));
            }
            out.csv.push(("dz_margins.csv".into(), fit.to_csv()));
            out.plots.push(("dz_margins.svg".into(), plot));
            trajectory = Some(
                run.snapshots()
                    .iter()
                    .map(|s| json!({ "step": s.step, "time": s.time, "values": s.field.values() }))
                    .collect::<Vec<_>>(),
            );
            m.set("dz_fit", serde_json::to_value(&fit).expect("fit serializes"));
        }
    }
    let ratio = fitted[1] / fitted[0];
    m.set("fitted_N", json!({ "coarse": num(fitted[0]), "fine": num(fitted[1]), "ratio": num(ratio) }));
    m.require("fitted_N_finite", fitted.iter().all(|f| f.is_finite()));
    m.require("fitted_N_refinement", ratio < p.fit_ratio_limit && ratio > 1.0 / p.fit_ratio_limit);
    if let Some(t) = trajectory {
        out.json.push(("trajectory.json".into(), json!({ "p": p.fit_p, "dt": p.dt, "snapshots": t })));
    }

    let mut orders = serde_json::Map::new();
    for &q in &p.p {
        let study = convergence_order(q, &u0, p.convergence_t, p.convergence_dt)?;
        orders.insert(format!("p={q}"), serde_json::to_value(&study).expect("study serializes"));
        m.require(format!("convergence_order_p{q}"), study.order >= p.min_order);
    }
    m.set("convergence", orders);
    Ok(())
}

pub fn run(p: &Params, seed: u64) -> Result<Outcome, CliError> {
    if !(p.dt > 0.0) || p.p.is_empty() || p.fit_times.is_empty() || p.taylor_order < 1 || p.snapshot_stride == 0 {
        return Err(CliError::config("nonlinear: need dt > 0, a non-empty p list and fit times, order >= 1"));
    }
    let mut m = Metrics::new();
    let mut out = Outcome::new(NAME, seed, p, Metrics::new());
    match checks(p, &mut m, &mut out) {
        Ok(()) => {}
        Err(e @ NonlinearError::InvalidArgument(_)) => return Err(CliError::config(e)),
        Err(e) => m.inconclusive("error", e),
    }
    let Outcome { csv, plots, json, .. } = out;
    let mut out = Outcome::new(NAME, seed, p, m);
    out.csv = csv;
    out.plots = plots;
    out.json = json;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn default_checks_pass() {
        let o = run(&Params::default(), 0).unwrap();
        assert_eq!(o.verdict(), Verdict::Pass, "{:?}", o.report);
        assert_eq!(o.json[0].0, "trajectory.json");
        assert_eq!(o.json[0].1["snapshots"].as_array().unwrap().len(), 21);
    }

    #[test]
    fn blow_up_is_inconclusive() {
        let p = Params { amplitude: 20.0, p: vec![2], ..Params::default() };
        assert_eq!(run(&p, 0).unwrap().verdict(), Verdict::Inconclusive);
    }

    #[test]
    fn bad_step_is_a_config_error() {
        let p = Params { dt: 0.0, ..Params::default() };
        assert!(matches!(run(&p, 0), Err(CliError::Config(_))));
    }
}
