//! Residual checks for the explicit solutions: Hermite eigen-iteration, the
//! inverse-square steady state, the Tychonov series and the snap solution.

use std::collections::BTreeMap;

use chronolens_core::gallery::{
    analyticity_probe, hermite_eigen_residual, inverse_square_residual, tychonov_decay, tychonov_derivative_bound,
    GalleryReport, InverseSquareSpec, TychonovParams, TychonovSeries,
};
use chronolens_core::numerics::linspace;
use chronolens_core::spectral::HermiteBasis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{cell, num, Metrics, Outcome};
use crate::svg::{Plot, Series, Style};
use crate::CliError;

pub const NAME: &str = "gallery";

const EXAMPLES: [&str; 4] = ["hermite", "inverse-square", "tychonov", "snap"];

#[derive(Debug, Clone, Default, Serialize, clap::Args)]
pub struct Flags {
    /// `all`, `hermite`, `inverse-square`, `tychonov` or `snap`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    /// Random inverse-square specs.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub specs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub example: String,
    pub hermite_truncation: usize,
    pub hermite_n_max: usize,
    pub hermite_k_max: u32,
    pub hermite_tolerance: f64,
    pub specs: usize,
    pub a_max: f64,
    pub d_min: u32,
    pub d_max: u32,
    pub identity_tolerance: f64,
    pub tychonov: TychonovParams,
    pub residual_tolerance: f64,
    pub origin_tolerance: f64,
    pub decay_m_max: u32,
    pub decay_threshold: f64,
    pub bound_k_max: usize,
    pub bound_limit: f64,
    pub snap_step: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            example: "all".into(),
            hermite_truncation: 16,
            hermite_n_max: 4,
            hermite_k_max: 5,
            hermite_tolerance: 1e-6,
            specs: 100,
            a_max: 10.0,
            d_min: 3,
            d_max: 10,
            identity_tolerance: 1e-12,
            tychonov: TychonovParams::default(),
            residual_tolerance: 1e-8,
            origin_tolerance: 1e-10,
            decay_m_max: 6,
            decay_threshold: 1e-6,
            bound_k_max: 10,
            bound_limit: 50.0,
            snap_step: 1e-2,
        }
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn hermite(p: &Params, m: &mut Metrics, out: &mut Outcome) -> Result<GalleryReport, CliError> {
    let basis = HermiteBasis::new(p.hermite_truncation);
    let mut csv = String::from("n,k,scale,diagonal,collocation\n");
    let mut worst = 0.0f64;
    for n in 0..=p.hermite_n_max {
        for k in 0..=p.hermite_k_max {
            let r = hermite_eigen_residual(n, k, &basis).map_err(CliError::config)?;
            worst = worst.max(r.diagonal).max(r.collocation);
            csv.push_str(&format!("{n},{k},{},{},{}\n", cell(r.scale), cell(r.diagonal), cell(r.collocation)));
        }
    }
    let pass = worst < p.hermite_tolerance;
    m.require("hermite_routes_agree", pass);
    out.csv.push(("hermite.csv".into(), csv));
    Ok(GalleryReport {
        example: "hermite".into(),
        params: params(&[
            ("truncation", p.hermite_truncation as f64),
            ("n_max", p.hermite_n_max as f64),
            ("k_max", p.hermite_k_max as f64),
        ]),
        residual: worst,
        bound_constants: BTreeMap::new(),
        pass,
    })
}

fn inverse_square(p: &Params, seed: u64, m: &mut Metrics) -> Result<GalleryReport, CliError> {
    if p.d_min < 3 || p.d_max < p.d_min || !(p.a_max >= 0.0) {
        return Err(CliError::config("gallery: need 3 <= d_min <= d_max and a_max >= 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut worst_radial = 0.0f64;
    for _ in 0..p.specs {
        let a = rng.random_range(0.0..=p.a_max);
        let d = rng.random_range(p.d_min..=p.d_max);
        let spec = InverseSquareSpec::new(a, d).map_err(CliError::config)?;
        worst = worst.max(spec.identity_defect().abs());
        worst_radial = worst_radial.max(inverse_square_residual(&spec, 0.1, 2.0, 50).map_err(CliError::config)?);
    }
    m.num("inverse_square_radial_residual", worst_radial);
    let pass = worst < p.identity_tolerance;
    m.require("inverse_square_identity", pass);
    Ok(GalleryReport {
        example: "inverse-square".into(),
        params: params(&[
            ("specs", p.specs as f64),
            ("a_max", p.a_max),
            ("d_min", p.d_min as f64),
            ("d_max", p.d_max as f64),
        ]),
        residual: worst,
        bound_constants: BTreeMap::new(),
        pass,
    })
}

fn tychonov(p: &Params, m: &mut Metrics, out: &mut Outcome) -> Result<GalleryReport, CliError> {
    let tp = p.tychonov;
    let series = TychonovSeries::new(tp).map_err(CliError::config)?;
    let mut worst = 0.0f64;
    let mut envelope = true;
    for t in linspace(tp.t_range.0, tp.t_range.1, 13) {
        for x in linspace(tp.x_range.0, tp.x_range.1, 17) {
            let v = series.eval(x, t).map_err(CliError::config)?;
            worst = worst.max(v.residual);
            envelope &= v.envelope_ok;
        }
    }
    m.require("tychonov_residual", worst < p.residual_tolerance);
    m.require("tychonov_envelope", envelope);

    let origin = if tp.t_range.0 <= 1.0 && 1.0 <= tp.t_range.1 && tp.x_range.0 <= 0.0 && 0.0 <= tp.x_range.1 {
        let u = series.eval(0.0, 1.0).map_err(CliError::config)?.u;
        let err = (u - (-1f64).exp()).abs();
        m.require("tychonov_origin_value", err < p.origin_tolerance);
        Some(err)
    } else {
        None
    };

    let x_max = tp.x_range.0.abs().max(tp.x_range.1.abs());
    let decay = tychonov_decay(tp.alpha, x_max, p.decay_m_max, 21).map_err(CliError::config)?;
    let decreasing = decay.windows(2).all(|w| w[1].1 < w[0].1);
    let last = decay.last().map_or(f64::INFINITY, |d| d.1.exp());
    m.require("tychonov_decay_monotone", decreasing);
    m.require("tychonov_decay_threshold", last < p.decay_threshold);
    let mut csv = String::from("m,t,ln_sup_abs_u\n");
    for (i, (t, l)) in decay.iter().enumerate() {
        csv.push_str(&format!("{i},{},{}\n", cell(*t), cell(*l)));
    }
    let pts: Vec<(f64, f64)> =
        decay.iter().enumerate().map(|(i, (_, l))| (i as f64, l / std::f64::consts::LN_10)).collect();
    let floor = vec![(0.0, p.decay_threshold.log10()), (p.decay_m_max as f64, p.decay_threshold.log10())];
    out.csv.push(("tychonov_decay.csv".into(), csv));
    out.plots.push((
        "tychonov_decay.svg".into(),
        Plot::new("Tychonov series toward t = 0", "m (t = 2^-m)", "log10 sup |u|")
            .with(Series::new("sup |u|", pts, Style::Line))
            .with(Series::new("threshold", floor, Style::Dashed)),
    ));

    let bound = tychonov_derivative_bound(tp.alpha, p.bound_k_max, 400);
    m.require("tychonov_derivative_bound", bound.constant > 0.0 && bound.constant <= p.bound_limit);
    m.set(
        "tychonov",
        json!({
            "residual": num(worst),
            "origin_error": origin.map_or(serde_json::Value::Null, num),
            "envelope_C": num(series.envelope_constant()),
            "derivative_bound_C": num(bound.constant),
            "decay_final": num(last),
        }),
    );

    let pass = worst < p.residual_tolerance
        && envelope
        && origin.is_none_or(|e| e < p.origin_tolerance)
        && decreasing
        && last < p.decay_threshold
        && bound.constant <= p.bound_limit;
    let mut constants = BTreeMap::new();
    constants.insert("envelope_C".into(), series.envelope_constant());
    constants.insert("derivative_bound_C".into(), bound.constant);
    Ok(GalleryReport {
        example: "tychonov".into(),
        params: params(&[("alpha", tp.alpha as f64), ("truncation", tp.truncation as f64)]),
        residual: worst,
        bound_constants: constants,
        pass,
    })
}

fn snap(p: &Params, m: &mut Metrics) -> Result<Vec<GalleryReport>, CliError> {
    let mut reports = Vec::new();
    for (num_, den, expect) in [(1u32, 2u32, 2usize), (2, 3, 3)] {
        let r = analyticity_probe(num_, den, p.snap_step).map_err(CliError::config)?;
        let pass = r.first_mismatch == Some(expect) && r.ode_residual < 1e-8;
        m.require(format!("snap_{num_}_{den}_mismatch_order"), r.first_mismatch == Some(expect));
        m.require(format!("snap_{num_}_{den}_ode"), r.ode_residual < 1e-8);
        let mut constants = BTreeMap::new();
        constants.insert("first_mismatch".into(), r.first_mismatch.map_or(f64::NAN, |o| o as f64));
        reports.push(GalleryReport {
            example: format!("snap-{num_}/{den}"),
            params: params(&[("p", num_ as f64 / den as f64), ("step", p.snap_step)]),
            residual: r.ode_residual,
            bound_constants: constants,
            pass,
        });
    }
    Ok(reports)
}

pub fn run(p: &Params, seed: u64) -> Result<Outcome, CliError> {
    let chosen: Vec<&str> = match p.example.as_str() {
        "all" => EXAMPLES.to_vec(),
        e if EXAMPLES.contains(&e) => vec![e],
        other => return Err(CliError::config(format!("unknown example {other:?}"))),
    };
    let mut m = Metrics::new();
    let mut out = Outcome::new(NAME, seed, p, Metrics::new());
    let mut reports = Vec::new();
    for e in chosen {
        match e {
            "hermite" => reports.push(hermite(p, &mut m, &mut out)?),
            "inverse-square" => reports.push(inverse_square(p, seed, &mut m)?),
            "tychonov" => reports.push(tychonov(p, &mut m, &mut out)?),
            _ => reports.extend(snap(p, &mut m)?),
        }
    }
    let finite: Vec<serde_json::Value> = reports
        .iter()
        .map(|r| {
            json!({
                "example": r.example,
                "params": r.params.iter().map(|(k, v)| (k.clone(), num(*v))).collect::<serde_json::Map<_, _>>(),
                "residual": num(r.residual),
                "bound_constants": r.bound_constants.iter().map(|(k, v)| (k.clone(), num(*v))).collect::<serde_json::Map<_, _>>(),
                "pass": r.pass,
            })
        })
        .collect();
    let Outcome { csv, plots, .. } = out;
    let mut out = Outcome::new(NAME, seed, p, m);
    out.csv = csv;
    out.plots = plots;
    out.json.push(("gallery.json".into(), serde_json::Value::Array(finite)));
    Ok(out)
}
