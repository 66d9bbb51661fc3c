use std::path::Path;
use std::process::{Command, Output};

use pzwave_cli::{run, CliError, Command as Cmd, RunConfig};

fn pzwave(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pzwave")).args(args).current_dir(dir).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL_FREQ: &str = r#"
seed = 7
[freq]
degree = 1
h = [0.5, 0.25]
n_points = 4
"#;

#[test]
fn unknown_keys_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[freq]\nfoo = 1\n");
    let out = pzwave(&["freq-convergence", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field `foo`"));
}

#[test]
fn invalid_values_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "[freq]\ndegree = 3\n",
        "[time]\nh = [0.1]\nkappa = [0.1, 0.05]\n",
        "[freq]\ns = [-1.0, 0.0]\n",
        "[simulate]\nsnapshots = [9.0]\n",
    ] {
        let cfg = write_config(dir.path(), text);
        let out = pzwave(&["simulate", "--config", &cfg], dir.path());
        assert_eq!(out.status.code(), Some(2), "{text}");
    }
    let out = pzwave(&["selftest", "--config", "missing.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.toml"));
    let out = pzwave(&["no-such-command"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_level_has_no_rates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[freq]\nh = [0.5]\nn_points = 4\n");
    let out = pzwave(&["freq-convergence", "--config", &cfg, "--out", "res"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("res/freq_convergence.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("h,E_v,ecr_E_v"));
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), 11);
    assert_eq!(fields.iter().filter(|f| **f == "-").count(), 5);
    let manifest: toml::Table = std::fs::read_to_string(dir.path().join("res/manifest.toml")).unwrap().parse().unwrap();
    assert_eq!(manifest["command"].as_str(), Some("freq-convergence"));
    assert_eq!(manifest["status"].as_str(), Some("ok"));
    assert_eq!(manifest["outputs"].as_array().unwrap()[0].as_str(), Some("freq_convergence.csv"));
    assert!(manifest["config"]["freq"].is_table());
}

#[test]
fn runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_FREQ);
    let mut tables = Vec::new();
    for (name, seed) in [("a", "7"), ("b", "7"), ("c", "8")] {
        let out = pzwave(&["freq-convergence", "--config", &cfg, "--out", name, "--seed", seed], dir.path());
        assert!(out.status.success());
        tables.push(std::fs::read(dir.path().join(name).join("freq_convergence.csv")).unwrap());
    }
    assert_eq!(tables[0], tables[1]);
    assert_ne!(tables[0], tables[2]);
}

#[test]
fn simulate_writes_snapshots_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
[simulate]
h = 0.25
degree = 1
scheme = "bdf2"
kappa = 0.05
t_final = 1.0
snapshots = [0.5, 1.0]
grid_n = 5

[simulate.pulse]
omega = 10.0
width = 3.14159
"#;
    let mut cfg = RunConfig::parse(text).unwrap();
    cfg.threads = 1;
    let report = run(Cmd::Simulate, &cfg, dir.path()).unwrap();
    assert_eq!(report.outputs.len(), 1 + 2 * 3);
    assert!(report.outputs.iter().all(|p| p.exists()));
    let manifest: toml::Table = std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap().parse().unwrap();
    let snaps = manifest["snapshots"].as_array().unwrap();
    assert_eq!(snaps.len(), 6);
    assert_eq!(snaps[0]["field"].as_str(), Some("acoustic"));
    assert_eq!(manifest["threads"].as_integer(), Some(1));
    let energy = std::fs::read_to_string(dir.path().join("snapshots/energy.csv")).unwrap();
    assert_eq!(energy.lines().next(), Some("time,energy"));
}

#[test]
fn config_round_trips_through_toml() {
    let cfg = RunConfig::parse(SMALL_FREQ).unwrap();
    assert_eq!(cfg.seed, Some(7));
    assert_eq!(cfg.freq.h, vec![0.5, 0.25]);
    let again = RunConfig::parse(&cfg.to_toml()).unwrap();
    assert_eq!(cfg, again);
    assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
}

#[test]
fn error_classes_map_to_exit_codes() {
    assert_eq!(CliError::Numerical("x".into()).exit_code(), 1);
    assert_eq!(CliError::Config("x".into()).exit_code(), 2);
    let e: CliError = pzwave::Error::Config("bad".into()).into();
    assert!(matches!(e, CliError::Config(_)));
}
