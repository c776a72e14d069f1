//! Backward-solvability gate: certified radius of the backward jet against
//! the requested horizon, with a closed-form reference when one exists.

use chronolens_core::spectral::{Field, Grid};
use chronolens_core::taylor::{backward_gate, fit_growth, iterate_directed, Direction, TaylorError};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::taylor::{growth_series, operator};
use crate::report::{cell, num, Metrics, Outcome};
use crate::svg::Plot;
use crate::CliError;

pub const NAME: &str = "backward-gate";

#[derive(Debug, Clone, Default, Serialize, clap::Args)]
pub struct Flags {
    /// `heat` or `biharmonic`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op: Option<String>,
    /// `sin1`, `two-mode` or `modes32`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Expected verdict; a mismatch fails the run.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_solvable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub op: String,
    pub data: String,
    pub horizon: f64,
    pub order: usize,
    pub grid_points: usize,
    /// Amplitude factors under which the verdict must not change.
    pub scales: Vec<f64>,
    /// Required sup-norm agreement with the reference when solvable.
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_solvable: Option<bool>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            op: "heat".into(),
            data: "sin1".into(),
            horizon: 1.0,
            order: 30,
            grid_points: 256,
            scales: vec![1e-2, 1e2],
            tolerance: 1e-8,
            expect_solvable: None,
        }
    }
}

impl Params {
    /// Thirty-two decaying modes, half a unit back: not certifiable.
    pub fn rough() -> Self {
        Self { data: "modes32".into(), horizon: 0.5, expect_solvable: Some(false), ..Self::default() }
    }
}

fn datum(name: &str, grid: &Grid) -> Result<Field, CliError> {
    match name {
        "sin1" => Ok(Field::from_fn(grid, f64::sin)),
        "two-mode" => Ok(Field::from_fn(grid, |x| x.sin() + 0.5 * (3.0 * x).sin())),
        "modes32" => Ok(Field::from_fn(grid, |x| (1..=32).map(|m| (m as f64 * x).sin() / (m * m) as f64).sum())),
        other => Err(CliError::config(format!("unknown datum {other:?} (sin1 | two-mode | modes32)"))),
    }
}

pub fn run(p: &Params, seed: u64) -> Result<Outcome, CliError> {
    if !(p.horizon > 0.0) || p.order < 8 || p.order > 200 || !(p.tolerance > 0.0) {
        return Err(CliError::config("backward-gate: need horizon > 0, 8 <= order <= 200 and tolerance > 0"));
    }
    let grid = Grid::new(p.grid_points, std::f64::consts::TAU).map_err(CliError::config)?;
    let op = operator(&p.op)?;
    let a = datum(&p.data, &grid)?;
    let symbol = op.symbol().expect("constant-coefficient operator");
    let reference = a.map_spectrum(|k| (-p.horizon * symbol(k)).exp());

    let mut m = Metrics::new();
    let (verdict, _) = match backward_gate(&op, &a, p.horizon, p.order, Some(&reference)) {
        Ok(v) => v,
        Err(e @ TaylorError::InvalidArgument(_)) => return Err(CliError::config(e)),
        Err(e) => {
            m.inconclusive("error", e);
            return Ok(Outcome::new(NAME, seed, p, m));
        }
    };
    m.set("gate", serde_json::to_value(&verdict).expect("verdict serializes"));
    m.set("solvable", verdict.solvable);

    if verdict.solvable {
        match verdict.reconstruction_error {
            Some(err) => {
                m.set("reconstruction_error", num(err));
                m.require("reconstruction_within_tolerance", err < p.tolerance);
            }
            None => m.inconclusive("reconstruction", "series tail did not reach the gate tolerance"),
        }
    }

    let mut scaled = Vec::new();
    let mut invariant = true;
    for &c in &p.scales {
        let (v, _) = backward_gate(&op, &a.scale(c), p.horizon, p.order, None).map_err(CliError::config)?;
        invariant &= v.solvable == verdict.solvable;
        scaled.push(json!({ "scale": c, "solvable": v.solvable, "certified_radius": num(v.certified_radius) }));
    }
    m.set("scaled", scaled);
    m.require("scale_invariant", invariant);
    if let Some(expect) = p.expect_solvable {
        m.require("matches_expectation", verdict.solvable == expect);
    }

    let jet = iterate_directed(&op, &a, p.order, Direction::Backward, 0.0).map_err(CliError::config)?;
    let cert = fit_growth(&jet).map_err(CliError::config)?;
    let mut csv = String::from("j,norm\n");
    for (j, n) in jet.norms().iter().enumerate() {
        csv.push_str(&format!("{j},{}\n", cell(*n)));
    }
    let mut plot = Plot::new(format!("Backward jet of {} ({})", p.data, p.op), "j", "ln ||a_j||");
    for s in growth_series(jet.norms(), &cert, &p.data) {
        plot = plot.with(s);
    }

    let mut out = Outcome::new(NAME, seed, p, m);
    out.csv.push(("jet_norms.csv".into(), csv));
    out.plots.push(("jet_growth.svg".into(), plot));
    Ok(out)
}
