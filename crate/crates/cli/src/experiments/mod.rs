//! One runner per subcommand, plus the aggregate `all`.

pub mod gallery;
pub mod gate;
pub mod identities;
pub mod kernel;
pub mod kovalevskaya;
pub mod nonlinear;
pub mod taylor;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::cli::{Cli, Command};
use crate::config::{load_file, resolve, ConfigFile, RunSettings};
use crate::report::{create_dir, to_json, write_file, write_outcome, Manifest, Outcome, Verdict};
use crate::CliError;

type Runner<P> = fn(&P, u64) -> Result<Outcome, CliError>;

pub fn dispatch(cli: &Cli) -> Result<Verdict, CliError> {
    let file = load_file(&cli.common)?;
    let settings = RunSettings::resolve(&cli.common, &file);
    let out = settings.out.clone();
    match &cli.command {
        Command::Identities(f) => single(identities::NAME, &file, f, &settings, identities::run),
        Command::Kovalevskaya(f) => single(kovalevskaya::NAME, &file, f, &settings, kovalevskaya::run),
        Command::Taylor(f) => single(taylor::NAME, &file, f, &settings, taylor::run),
        Command::BackwardGate(f) => single(gate::NAME, &file, f, &settings, gate::run),
        Command::KernelBounds(f) => single(kernel::NAME, &file, f, &settings, kernel::run),
        Command::Gallery(f) => single(gallery::NAME, &file, f, &settings, gallery::run),
        Command::Nonlinear(f) => single(nonlinear::NAME, &file, f, &settings, nonlinear::run),
        Command::All => all(&file, &settings, &out),
    }
}

fn single<P, F>(
    name: &str,
    file: &ConfigFile,
    flags: &F,
    settings: &RunSettings,
    runner: Runner<P>,
) -> Result<Verdict, CliError>
where
    P: DeserializeOwned + Serialize,
    F: Serialize,
{
    let params: P = resolve(file.section(name), flags)?;
    execute(name, &params, settings, &settings.out, runner)
}

fn execute<P: Serialize>(
    name: &str,
    params: &P,
    settings: &RunSettings,
    dir: &Path,
    runner: Runner<P>,
) -> Result<Verdict, CliError> {
    let start = Instant::now();
    let outcome = runner(params, settings.seed)?;
    let files = write_outcome(&outcome, settings, dir)?;
    let wall = start.elapsed().as_secs_f64();
    Manifest::new(name, settings, dir, outcome.verdict(), wall, files, params)?.write(dir)?;
    Ok(outcome.verdict())
}

fn no_flags() -> BTreeMap<String, String> {
    BTreeMap::new()
}

/// Runs every experiment into its own subdirectory of `out` and writes a
/// `summary.json` with each verdict.
fn all(file: &ConfigFile, settings: &RunSettings, out: &Path) -> Result<Verdict, CliError> {
    let start = Instant::now();
    create_dir(out)?;
    let mut verdicts: Vec<(String, Verdict)> = Vec::new();
    let mut resolved: BTreeMap<String, toml::Table> = BTreeMap::new();

    macro_rules! step {
        ($dir:expr, $name:expr, $params:expr, $runner:expr) => {{
            let params = $params;
            let v = execute($name, &params, settings, &out.join($dir), $runner)?;
            resolved.insert($dir.to_string(), toml::Table::try_from(&params).map_err(CliError::config)?);
            verdicts.push(($dir.to_string(), v));
        }};
    }

    let p: identities::Params = resolve(file.section(identities::NAME), &no_flags())?;
    step!("identities", identities::NAME, p, identities::run);
    let p: kovalevskaya::Params = resolve(file.section(kovalevskaya::NAME), &no_flags())?;
    step!("kovalevskaya", kovalevskaya::NAME, p, kovalevskaya::run);
    let p: taylor::Params = resolve(file.section(taylor::NAME), &no_flags())?;
    step!("taylor", taylor::NAME, p, taylor::run);
    let mut p: gate::Params = resolve(file.section(gate::NAME), &no_flags())?;
    p.expect_solvable.get_or_insert(true);
    step!("backward-gate", gate::NAME, p, gate::run);
    step!("backward-gate-rough", gate::NAME, gate::Params::rough(), gate::run);
    let p: kernel::Params = resolve(file.section(kernel::NAME), &no_flags())?;
    step!("kernel-bounds", kernel::NAME, p, kernel::run);
    let p: gallery::Params = resolve(file.section(gallery::NAME), &no_flags())?;
    step!("gallery", gallery::NAME, p, gallery::run);
    let p: nonlinear::Params = resolve(file.section(nonlinear::NAME), &no_flags())?;
    step!("nonlinear", nonlinear::NAME, p, nonlinear::run);

    let verdict = Verdict::combine(verdicts.iter().map(|(_, v)| *v));
    let summary = json!({
        "seed": settings.seed,
        "experiments": verdicts
            .iter()
            .map(|(name, v)| json!({ "name": name, "verdict": v }))
            .collect::<Vec<_>>(),
        "verdict": verdict,
    });
    let mut files = vec![];
    if settings.wants(crate::cli::Format::Json) {
        write_file(out, "summary.json", &to_json(&summary))?;
        files.push("summary.json".to_string());
    }
    let wall = start.elapsed().as_secs_f64();
    Manifest::new("all", settings, out, verdict, wall, files, &resolved)?.write(out)?;
    Ok(verdict)
}
