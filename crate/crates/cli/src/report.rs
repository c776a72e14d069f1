use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cli::Format;
use crate::config::RunSettings;
use crate::svg::Plot;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 3,
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        verdicts.into_iter().fold(Verdict::Pass, |acc, v| match (acc, v) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        })
    }
}

/// JSON number, or `"inf"`/`"-inf"`/`"nan"` for non-finite values.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Named metrics plus the list of failed requirements.
#[derive(Debug, Clone, Default)]
pub struct Metrics {
    values: BTreeMap<String, Value>,
    failures: Vec<String>,
    inconclusive: Vec<String>,
}

impl Metrics {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: impl Into<String>, v: impl Into<Value>) {
        self.values.insert(key.into(), v.into());
    }

    pub fn num(&mut self, key: impl Into<String>, x: f64) {
        self.values.insert(key.into(), num(x));
    }

    /// Records a boolean metric that must hold for a pass.
    pub fn require(&mut self, key: impl Into<String>, ok: bool) {
        let key = key.into();
        if !ok {
            self.failures.push(key.clone());
        }
        self.values.insert(key, Value::from(ok));
    }

    pub fn inconclusive(&mut self, key: impl Into<String>, reason: impl std::fmt::Display) {
        let key = key.into();
        self.values.insert(key.clone(), Value::from(reason.to_string()));
        self.inconclusive.push(key);
    }

    pub fn verdict(&self) -> Verdict {
        if !self.failures.is_empty() {
            Verdict::Fail
        } else if !self.inconclusive.is_empty() {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

/// The JSON report of one experiment. Wall time lives in the manifest so
/// reports stay byte-identical across runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    pub config: Value,
    pub metrics: BTreeMap<String, Value>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inconclusive: Vec<String>,
}

/// Everything an experiment produces.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub csv: Vec<(String, String)>,
    pub plots: Vec<(String, Plot)>,
    pub json: Vec<(String, Value)>,
}

impl Outcome {
    pub fn new(experiment: &str, seed: u64, config: &impl Serialize, metrics: Metrics) -> Self {
        let verdict = metrics.verdict();
        Self {
            report: Report {
                experiment: experiment.to_string(),
                seed,
                config: serde_json::to_value(config).expect("params serialize"),
                metrics: metrics.values,
                verdict,
                failed: metrics.failures,
                inconclusive: metrics.inconclusive,
            },
            csv: Vec::new(),
            plots: Vec::new(),
            json: Vec::new(),
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.report.verdict
    }
}

pub fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })
}

/// Writes the selected artifacts of `outcome` into `dir`; returns the file
/// names written, manifest excluded.
pub fn write_outcome(outcome: &Outcome, settings: &RunSettings, dir: &Path) -> Result<Vec<String>, CliError> {
    create_dir(dir)?;
    let mut files = Vec::new();
    if settings.wants(Format::Json) {
        write_file(dir, "report.json", &to_json(&outcome.report))?;
        files.push("report.json".to_string());
        for (name, v) in &outcome.json {
            write_file(dir, name, &to_json(v))?;
            files.push(name.clone());
        }
    }
    if settings.wants(Format::Csv) {
        for (name, text) in &outcome.csv {
            write_file(dir, name, text)?;
            files.push(name.clone());
        }
    }
    if settings.wants(Format::Svg) {
        for (name, plot) in &outcome.plots {
            if let Some(svg) = plot.render() {
                write_file(dir, name, &svg)?;
                files.push(name.clone());
            }
        }
    }
    Ok(files)
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub experiment: String,
    pub seed: u64,
    pub formats: Vec<Format>,
    pub out: String,
    pub verdict: Verdict,
    pub wall_time_seconds: f64,
    pub threads: usize,
    pub files: Vec<String>,
    pub params: toml::Table,
}

impl Manifest {
    pub fn new(
        experiment: &str,
        settings: &RunSettings,
        dir: &Path,
        verdict: Verdict,
        wall_time_seconds: f64,
        files: Vec<String>,
        params: &impl Serialize,
    ) -> Result<Self, CliError> {
        Ok(Self {
            tool: "chronolens".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            experiment: experiment.into(),
            seed: settings.seed,
            formats: settings.formats.clone(),
            out: dir.display().to_string(),
            verdict,
            wall_time_seconds,
            threads: rayon::current_num_threads(),
            files,
            params: toml::Table::try_from(params).map_err(CliError::config)?,
        })
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let text = toml::to_string(self).map_err(CliError::config)?;
        write_file(dir, "manifest.toml", &text)
    }
}

/// CSV cell for a float: shortest round-trip decimal.
pub fn cell(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_precedence() {
        use Verdict::*;
        assert_eq!(Verdict::combine([Pass, Pass]), Pass);
        assert_eq!(Verdict::combine([Pass, Inconclusive]), Inconclusive);
        assert_eq!(Verdict::combine([Inconclusive, Fail, Pass]), Fail);
        assert_eq!(Verdict::combine([]), Pass);
        assert_eq!([Pass, Fail, Inconclusive].map(Verdict::exit_code), [0, 1, 3]);
    }

    #[test]
    fn metrics_drive_the_verdict() {
        let mut m = Metrics::new();
        m.num("x", f64::INFINITY);
        m.require("ok", true);
        assert_eq!(m.verdict(), Verdict::Pass);
        m.inconclusive("guard", "tripped");
        assert_eq!(m.verdict(), Verdict::Inconclusive);
        m.require("bad", false);
        let o = Outcome::new("t", 1, &BTreeMap::<String, f64>::new(), m);
        assert_eq!(o.verdict(), Verdict::Fail);
        assert_eq!(o.report.metrics["x"], Value::from("inf"));
        assert_eq!(o.report.failed, vec!["bad".to_string()]);
    }

    #[test]
    fn cells_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 259459200.0, -2.5e17] {
            assert_eq!(cell(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(cell(1.0), "1.0");
        assert_eq!(cell(f64::NEG_INFINITY), "-inf");
    }
}
