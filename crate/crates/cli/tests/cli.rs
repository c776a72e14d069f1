use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn chronolens(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chronolens")).arg("--out").arg(out).args(args).output().expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("chronolens.toml");
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn help_and_version_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(chronolens(tmp.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(chronolens(tmp.path(), &["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(chronolens(tmp.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(chronolens(tmp.path(), &["kovalevskaya", "--m-max", "many"]).status.code(), Some(2));
    assert_eq!(chronolens(tmp.path(), &["--format", "pdf", "kovalevskaya"]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("absent.toml").display().to_string();
    let o = chronolens(tmp.path(), &["--config", &missing, "kovalevskaya"]);
    assert_eq!(o.status.code(), Some(2));

    let cfg = write_config(tmp.path(), "[kovalevskaya]\nm_maximum = 3\n");
    let o = chronolens(tmp.path(), &["--config", &cfg, "kovalevskaya"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m_maximum"));

    let cfg = write_config(tmp.path(), "[kovalevsky]\nn = 3\n");
    assert_eq!(chronolens(tmp.path(), &["--config", &cfg, "kovalevskaya"]).status.code(), Some(2));

    let o = chronolens(tmp.path(), &["backward-gate", "--op", "wave"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_config_over_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "seed = 11\n[kovalevskaya]\nm_max = 4\nl_max = 8\n");
    let out = tmp.path().join("run");
    let o = Command::new(env!("CARGO_BIN_EXE_chronolens"))
        .args(["--out", out.to_str().unwrap(), "--config", &cfg, "kovalevskaya", "--l-max", "10"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "pass");
    let r = report(&out);
    assert_eq!(r["seed"], 11);
    assert_eq!(r["config"]["m_max"], 4);
    assert_eq!(r["config"]["l_max"], 10);
    assert_eq!(r["config"]["n"], 2);

    let manifest: toml::Table = std::fs::read_to_string(out.join("manifest.toml")).unwrap().parse().unwrap();
    assert_eq!(manifest["experiment"].as_str(), Some("kovalevskaya"));
    assert_eq!(manifest["params"]["l_max"].as_integer(), Some(10));
    assert!(manifest["wall_time_seconds"].as_float().unwrap() >= 0.0);
}

#[test]
fn verdicts_map_to_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = chronolens(
        &tmp.path().join("fail"),
        &["backward-gate", "--data", "modes32", "--horizon", "0.5", "--expect-solvable", "true"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "fail");
    let r = report(&tmp.path().join("fail"));
    assert_eq!(r["failed"][0], "matches_expectation");

    let cfg = write_config(tmp.path(), "[backward-gate]\ngrid_points = 32\ndata = \"modes32\"\n");
    let o = chronolens(&tmp.path().join("unresolved"), &["--config", &cfg, "backward-gate"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "inconclusive");
}

#[test]
fn format_selection_limits_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("json-only");
    assert_eq!(chronolens(&out, &["--format", "json", "kovalevskaya"]).status.code(), Some(0));
    let mut names: Vec<String> =
        std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    assert_eq!(names, ["manifest.toml", "report.json"]);

    let out = tmp.path().join("csv-svg");
    assert_eq!(chronolens(&out, &["--format", "csv,svg", "kovalevskaya"]).status.code(), Some(0));
    assert!(!out.join("report.json").exists());
    assert!(out.join("ratio.csv").exists());
    let svg = std::fs::read_to_string(out.join("ratio.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn same_seed_same_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["--seed", "5", "identities", "--cases", "40"];
    for name in ["a", "b"] {
        assert_eq!(chronolens(&tmp.path().join(name), &args).status.code(), Some(0));
    }
    let a = std::fs::read(tmp.path().join("a/report.json")).unwrap();
    let b = std::fs::read(tmp.path().join("b/report.json")).unwrap();
    assert_eq!(a, b);
    let csv_a = std::fs::read(tmp.path().join("a/tri_sum.csv")).unwrap();
    let csv_b = std::fs::read(tmp.path().join("b/tri_sum.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
}
