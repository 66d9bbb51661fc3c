use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pzwave_cli::{run, CliError, Command, RunConfig};

/// Coupled FEM/BEM solver for acoustic scattering by piezoelectric bodies.
#[derive(Parser, Debug)]
#[command(name = "pzwave", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// TOML configuration file; built-in defaults otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for the random sample points.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Frequency-domain refinement study on the test rectangle.
    FreqConvergence,
    /// Time-domain refinement study with simultaneous h and step halving.
    TimeConvergence,
    /// Pulse scattering by the pentagonal body.
    Simulate,
    /// Quick property checks.
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.apply_seed(cli.seed);
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    let cmd = match cli.command {
        Cmd::FreqConvergence => Command::FreqConvergence,
        Cmd::TimeConvergence => Command::TimeConvergence,
        Cmd::Simulate => Command::Simulate,
        Cmd::Selftest => Command::Selftest,
    };
    let report = run(cmd, &cfg, &cli.out)?;
    for line in &report.summary {
        println!("{line}");
    }
    for p in &report.outputs {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}
