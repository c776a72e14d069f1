//! Taylor round-trips for the heat and biharmonic heat equations against
//! closed-form mode multipliers, with the growth certificate of each jet.

use chronolens_core::spectral::{Field, Grid, OperatorSpec};
use chronolens_core::taylor::{fit_growth, iterate, propagate, TaylorError};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{cell, num, opt_num, Metrics, Outcome};
use crate::svg::{Plot, Series, Style};
use crate::CliError;

pub const NAME: &str = "taylor";

#[derive(Debug, Clone, Default, Serialize, clap::Args)]
pub struct Flags {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Time offsets, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// `heat` and/or `biharmonic`, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operators: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub order: usize,
    pub shifts: Vec<f64>,
    /// Required sup-norm agreement with the closed form.
    pub tolerance: f64,
    /// Certified tail budget handed to the stepper.
    pub tail_tolerance: f64,
    pub operators: Vec<String>,
    pub grid_points: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            order: 30,
            shifts: vec![0.1, -0.1, 0.2, -0.2],
            tolerance: 1e-10,
            tail_tolerance: 1e-12,
            operators: vec!["heat".into(), "biharmonic".into()],
            grid_points: 256,
        }
    }
}

pub(crate) fn operator(name: &str) -> Result<OperatorSpec, CliError> {
    match name {
        "heat" => Ok(OperatorSpec::Laplacian),
        "biharmonic" => Ok(OperatorSpec::NegBiharmonic),
        other => Err(CliError::config(format!("unknown operator {other:?} (heat | biharmonic)"))),
    }
}

/// Spacing of doubles at `|x|`.
fn ulp(x: f64) -> f64 {
    if x == 0.0 {
        f64::MIN_POSITIVE
    } else {
        2f64.powf(x.abs().log2().floor()) * f64::EPSILON
    }
}

/// Jet norms with the fitted growth line for one plot.
pub(crate) fn growth_series(
    norms: &[f64],
    cert: &chronolens_core::taylor::GrowthCertificate,
    label: &str,
) -> Vec<Series> {
    let pts: Vec<(f64, f64)> = norms.iter().enumerate().map(|(j, n)| (j as f64, n.ln())).collect();
    let (lo, hi) = cert.fit_window;
    let idx: Vec<usize> = (lo..=hi).filter(|&j| norms[j] > 0.0).collect();
    let line: Vec<(f64, f64)> = idx.iter().zip(&cert.residuals).map(|(&j, r)| (j as f64, norms[j].ln() - r)).collect();
    vec![
        Series::new(format!("{label} ln|a_j|"), pts, Style::Markers),
        Series::new(format!("{label} fit"), line, Style::Line),
    ]
}

pub fn run(p: &Params, seed: u64) -> Result<Outcome, CliError> {
    if p.order < 8 || p.order > 200 || !(p.tolerance > 0.0) || !(p.tail_tolerance > 0.0) || p.shifts.is_empty() {
        return Err(CliError::config("taylor: need 8 <= order <= 200, positive tolerances and at least one shift"));
    }
    let grid = Grid::new(p.grid_points, std::f64::consts::TAU).map_err(CliError::config)?;
    let a0 = Field::from_fn(&grid, |x| x.sin() + 0.5 * (3.0 * x).sin());
    let mut m = Metrics::new();
    let mut csv = String::from("operator,shift,error,relative_error,tail_bound,steps,representable_floor,pass\n");
    let mut cases = Vec::new();
    let mut growth = Plot::new("Jet growth of sin x + 0.5 sin 3x", "j", "ln ||a_j||");

    for name in &p.operators {
        let op = operator(name)?;
        let symbol = op.symbol().expect("constant-coefficient operator");
        let jet = match iterate(&op, &a0, p.order) {
            Ok(j) => j,
            Err(e) => return inconclusive(p, seed, e),
        };
        let cert = fit_growth(&jet).map_err(CliError::config)?;
        m.set(
            format!("{name}_certificate"),
            json!({
                "fitted_A": opt_num(cert.fitted_a),
                "radius": num(cert.radius),
                "fit_window": [cert.fit_window.0, cert.fit_window.1],
            }),
        );
        for s in growth_series(jet.norms(), &cert, name) {
            growth = growth.with(s);
        }

        for &s in &p.shifts {
            let exact = Field::from_fn(&grid, |x| {
                (symbol(1.0) * s).exp() * x.sin() + 0.5 * (symbol(3.0) * s).exp() * (3.0 * x).sin()
            });
            let prop = match propagate(&op, &a0, 0.0, s, p.order, p.tail_tolerance) {
                Ok(v) => v,
                Err(e @ TaylorError::InvalidArgument(_)) => return Err(CliError::config(e)),
                Err(e) => return inconclusive(p, seed, e),
            };
            let field = prop.field.expect("propagate returns the field");
            let error = field.max_abs_diff(&exact).map_err(CliError::config)?;
            let scale = exact.sup_norm();
            let floor = 0.5 * ulp(scale);
            let pass = error < p.tolerance;
            let key = format!("{name}_s={s:+}");
            m.require(format!("{key}_within_tolerance"), pass);
            csv.push_str(&format!(
                "{name},{},{},{},{},{},{},{pass}\n",
                cell(s),
                cell(error),
                cell(error / scale),
                cell(prop.tail_bound),
                prop.steps.len(),
                cell(floor)
            ));
            cases.push(json!({
                "operator": name,
                "shift": s,
                "error": num(error),
                "relative_error": num(error / scale),
                "tail_bound": num(prop.tail_bound),
                "steps": prop.steps.len(),
                "representable_floor": num(floor),
                "tolerance_below_representable": floor > p.tolerance,
                "pass": pass,
            }));
        }
    }
    m.set("cases", cases);
    let mut out = Outcome::new(NAME, seed, p, m);
    out.csv.push(("taylor_cases.csv".into(), csv));
    out.plots.push(("jet_growth.svg".into(), growth));
    Ok(out)
}

fn inconclusive(p: &Params, seed: u64, e: TaylorError) -> Result<Outcome, CliError> {
    let mut m = Metrics::new();
    m.inconclusive("error", e);
    Ok(Outcome::new(NAME, seed, p, m))
}
