//! Command implementations behind the `pzwave` binary.

pub mod config;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use pzwave::cq::SchemeKind;
use pzwave::materials::MaterialSet;
use pzwave::mesh::DiagonalPattern;
use pzwave::verify::checks;
use pzwave::verify::runs::rectangle_problem;
use pzwave::verify::{
    run_freq_convergence, run_sample_simulation, run_time_convergence, ConvergenceTable, LevelFailure,
};
use pzwave::C64;

pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for numerical failures, 2 for configuration problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<pzwave::Error> for CliError {
    fn from(e: pzwave::Error) -> Self {
        use pzwave::Error as E;
        match e {
            E::Parameter(_)
            | E::Geometry(_)
            | E::Validation(_)
            | E::Configuration(_)
            | E::Config(_)
            | E::Parse { .. } => CliError::Config(e.to_string()),
            E::Io(io) => CliError::Io(io),
            E::Solver { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    FreqConvergence,
    TimeConvergence,
    Simulate,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::FreqConvergence => "freq-convergence",
            Command::TimeConvergence => "time-convergence",
            Command::Simulate => "simulate",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Serialize)]
struct SnapshotEntry {
    time: f64,
    field: String,
    file: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    status: &'a str,
    seed: Option<u64>,
    threads: usize,
    parallel_backend: bool,
    wall_time_s: f64,
    outputs: &'a [String],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    snapshots: &'a [SnapshotEntry],
    config: &'a RunConfig,
}

/// Outcome of a command that ran to completion.
#[derive(Debug)]
pub struct Report {
    pub outputs: Vec<PathBuf>,
    /// Lines for the terminal.
    pub summary: Vec<String>,
}

struct Output {
    files: Vec<String>,
    snapshots: Vec<SnapshotEntry>,
    summary: Vec<String>,
}

/// Runs `cmd` and writes its outputs plus `manifest.toml` into `out`. The
/// manifest is written on numerical failure too.
pub fn run(cmd: Command, cfg: &RunConfig, out: &Path) -> Result<Report, CliError> {
    cfg.check()?;
    std::fs::create_dir_all(out)?;
    let start = Instant::now();
    let result = pzwave::par::with_threads(cfg.threads, || match cmd {
        Command::FreqConvergence => freq(cfg, out),
        Command::TimeConvergence => time(cfg, out),
        Command::Simulate => simulate(cfg, out),
        Command::Selftest => selftest(out),
    });
    let wall = start.elapsed().as_secs_f64();
    let (status, files, snapshots) = match &result {
        Ok(o) => ("ok", &o.files, &o.snapshots[..]),
        Err((_, files)) => ("failed", files, &[][..]),
    };
    let manifest = Manifest {
        command: cmd.name(),
        version: env!("CARGO_PKG_VERSION"),
        status,
        seed: cfg.seed,
        threads: cfg.threads,
        parallel_backend: pzwave::par::is_parallel(),
        wall_time_s: wall,
        outputs: files,
        snapshots,
        config: cfg,
    };
    let text = toml::to_string(&manifest).map_err(|e| CliError::Config(format!("cannot serialize manifest: {e}")))?;
    std::fs::write(out.join("manifest.toml"), text)?;
    match result {
        Ok(o) => Ok(Report { outputs: o.files.iter().map(|f| out.join(f)).collect(), summary: o.summary }),
        Err((e, _)) => Err(e),
    }
}

type CmdResult = Result<Output, (CliError, Vec<String>)>;

fn no_files(e: impl Into<CliError>) -> (CliError, Vec<String>) {
    (e.into(), Vec::new())
}

fn write_table(table: &ConvergenceTable, path: &Path) -> Result<(), CliError> {
    table.write_csv(BufWriter::new(File::create(path)?))?;
    Ok(())
}

fn finish_table(result: Result<ConvergenceTable, LevelFailure>, out: &Path, name: &str) -> CmdResult {
    match result {
        Ok(table) => {
            write_table(&table, &out.join(name)).map_err(no_files)?;
            Ok(Output { files: vec![name.into()], snapshots: Vec::new(), summary: vec![table.to_string()] })
        }
        Err(fail) => {
            let files = match write_table(&fail.table, &out.join(name)) {
                Ok(()) => vec![name.to_string()],
                Err(_) => Vec::new(),
            };
            let err = match fail.source {
                pzwave::Error::Solver { .. } => CliError::Numerical(format!("level {}: {}", fail.level, fail.source)),
                other => CliError::from(other),
            };
            Err((err, files))
        }
    }
}

fn freq(cfg: &RunConfig, out: &Path) -> CmdResult {
    let result = run_freq_convergence(&cfg.freq, |r| eprintln!("h = {:.4}: {:?}", r.h, r.errors));
    finish_table(result, out, "freq_convergence.csv")
}

fn time(cfg: &RunConfig, out: &Path) -> CmdResult {
    let result =
        run_time_convergence(&cfg.time, |r| eprintln!("h = {:.4}, kappa = {:?}: {:?}", r.h, r.kappa, r.errors));
    finish_table(result, out, "time_convergence.csv")
}

fn simulate(cfg: &RunConfig, out: &Path) -> CmdResult {
    let run = run_sample_simulation(&cfg.simulate).map_err(no_files)?;
    let entries = run.write(&out.join("snapshots")).map_err(no_files)?;
    let mut files = vec!["snapshots/energy.csv".to_string()];
    let snapshots: Vec<SnapshotEntry> = entries
        .into_iter()
        .map(|(t, field, name)| {
            let file = format!("snapshots/{name}");
            files.push(file.clone());
            SnapshotEntry { time: t, field: field.into(), file }
        })
        .collect();
    let peak = run.energy.iter().map(|e| e.1).fold(0.0, f64::max);
    let summary = vec![format!("{} snapshots, peak solid energy {peak:.4e}", cfg.simulate.snapshots.len())];
    Ok(Output { files, snapshots, summary })
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

/// One line of the self test.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Property suites: Bessel oracle, jump relations, interior vanishing,
/// coercivity, CQ order and unique solvability.
pub fn selftest_checks() -> Result<Vec<CheckLine>, pzwave::Error> {
    let mut lines = Vec::new();
    let (bessel, n) = checks::bessel_k0_error();
    lines.push(CheckLine {
        name: "bessel K0 oracle",
        passed: bessel <= 1e-12 && n >= 1800,
        detail: format!("worst relative error {bessel:.2e} over {n} points"),
    });
    let jump = checks::single_layer_jump(0.05, C64::new(2.0, 0.0), 2)?;
    lines.push(CheckLine {
        name: "single layer continuity",
        passed: jump <= 1e-6,
        detail: format!("two-sided mismatch {jump:.2e}"),
    });
    let v = checks::interior_vanishing(C64::new(2.0, -1.0), 2, &[0.2, 0.1, 0.05])?;
    let factors: Vec<f64> = v.windows(2).map(|w| w[0] / w[1]).collect();
    lines.push(CheckLine {
        name: "interior vanishing",
        passed: factors.iter().all(|&f| f >= 3.5),
        detail: format!("|v| {}, reduction factors {factors:.2?}", sci(&v)),
    });
    let coer = checks::coercivity_deviation(50, 7)?;
    lines.push(CheckLine {
        name: "coercivity identity",
        passed: coer <= 1e-10,
        detail: format!("worst relative deviation {coer:.2e}"),
    });
    for kind in [SchemeKind::Bdf2, SchemeKind::Tr] {
        let orders = checks::cq_integration_orders(kind)?;
        lines.push(CheckLine {
            name: if kind == SchemeKind::Bdf2 { "CQ order BDF2" } else { "CQ order TR" },
            passed: orders.iter().all(|&o| o >= 1.9),
            detail: format!("observed orders {orders:.3?}"),
        });
    }
    let problem = rectangle_problem(0.25, 1, MaterialSet::standard(), DiagonalPattern::Right)?;
    let (mag, res) = checks::unique_solvability(&problem, 20, 42)?;
    lines.push(CheckLine {
        name: "unique solvability",
        passed: mag <= 1e-10 && res <= 1e-10,
        detail: format!("zero-data magnitude {mag:.2e}, random-data residual {res:.2e}"),
    });
    Ok(lines)
}

fn selftest(out: &Path) -> CmdResult {
    let lines = selftest_checks().map_err(no_files)?;
    let text: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
    std::fs::write(out.join("selftest.txt"), text.join("\n") + "\n").map_err(no_files)?;
    let files = vec!["selftest.txt".to_string()];
    let failed = lines.iter().filter(|l| !l.passed).count();
    if failed > 0 {
        for l in &text {
            eprintln!("{l}");
        }
        return Err((CliError::Numerical(format!("{failed} self-test check(s) failed")), files));
    }
    Ok(Output { files, snapshots: Vec::new(), summary: text })
}
