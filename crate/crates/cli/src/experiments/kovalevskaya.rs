//! Kovalevskaya coefficients: closed form against the recursion, and the
//! growth of `(8n)!/(n!(4n)!)`.

use chronolens_core::exact::{kovalevskaya_coeff, kovalevskaya_coeff_recursive, kovalevskaya_ratio};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::report::{cell, Metrics, Outcome};
use crate::svg::{Plot, Series, Style};
use crate::CliError;

pub const NAME: &str = "kovalevskaya";

#[derive(Debug, Clone, Default, Serialize, clap::Args)]
pub struct Flags {
    /// Index of the reported ratio.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_max: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone_n_max: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub n: u64,
    pub m_max: u64,
    pub l_max: u64,
    pub monotone_n_max: u64,
    /// `ratio(2)` must exceed this.
    pub threshold: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self { n: 2, m_max: 6, l_max: 12, monotone_n_max: 8, threshold: 1e6 }
    }
}

/// Exact integer as a JSON number when it fits in `u64`, else as a string.
fn exact_value(q: &num_rational::BigRational) -> Value {
    if q.is_integer() {
        if let Some(v) = q.to_integer().to_u64() {
            return Value::from(v);
        }
    }
    Value::from(q.to_string())
}

pub fn run(p: &Params, seed: u64) -> Result<Outcome, CliError> {
    if p.m_max > 40 || p.l_max > 80 || p.n > 200 || p.monotone_n_max > 200 {
        return Err(CliError::config("kovalevskaya: need m_max <= 40, l_max <= 80, n and monotone_n_max <= 200"));
    }
    let mut m = Metrics::new();
    let mut disagreements = Vec::new();
    for mm in 0..=p.m_max {
        for l in 0..=p.l_max {
            if kovalevskaya_coeff(mm, l) != kovalevskaya_coeff_recursive(mm, l) {
                disagreements.push(format!("({mm},{l})"));
            }
        }
    }
    m.set("coefficient_pairs", (p.m_max + 1) * (p.l_max + 1));
    m.set("coefficient_disagreements", disagreements.clone());
    m.require("formula_matches_recursion", disagreements.is_empty());
    m.set("a(0,2)", kovalevskaya_coeff(0, 2).to_string());
    m.set("a(1,0)", kovalevskaya_coeff(1, 0).to_string());
    m.set("a(2,2)", kovalevskaya_coeff(2, 2).to_string());

    let top = p.monotone_n_max.max(p.n).max(2);
    let ratios: Vec<_> = (0..=top).map(kovalevskaya_ratio).collect();
    let monotone = ratios[..=p.monotone_n_max as usize].windows(2).all(|w| w[1] > w[0]);
    m.set("ratio", exact_value(&ratios[p.n as usize]));
    m.set("n", p.n);
    m.require("ratio_strictly_increasing", monotone);
    let r2 = ratios[2].to_f64().unwrap_or(f64::INFINITY);
    m.require("ratio_2_above_threshold", r2 > p.threshold);

    let mut csv = String::from("n,ratio,log10_ratio\n");
    let mut pts = Vec::new();
    for (n, r) in ratios.iter().enumerate() {
        let lg = log10_big(r);
        csv.push_str(&format!("{n},{},{}\n", r, cell(lg)));
        pts.push((n as f64, lg));
    }
    let plot = Plot::new("(8n)! / (n! (4n)!)", "n", "log10 ratio").with(Series::new("ratio", pts, Style::Line));

    let mut out = Outcome::new(NAME, seed, p, m);
    out.csv.push(("ratio.csv".into(), csv));
    out.plots.push(("ratio.svg".into(), plot));
    Ok(out)
}

fn log10_big(q: &num_rational::BigRational) -> f64 {
    let digits = |n: &num_bigint::BigInt| {
        let s = n.magnitude().to_string();
        let lead: f64 = s[..s.len().min(15)].parse().unwrap_or(0.0);
        lead.log10() + (s.len() as f64 - s.len().min(15) as f64)
    };
    digits(q.numer()) - digits(q.denom())
}
