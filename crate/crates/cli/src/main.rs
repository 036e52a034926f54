//! `qclock`: scenario runner for the oscillator library.
//!
//! Exit codes: 0 all checks pass, 1 a residual exceeds its tolerance,
//! 2 configuration error, 3 numerical failure.

mod batch;
mod commands;
mod config;
mod error;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Command;
use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::report::write_file;

#[derive(Parser, Debug)]
#[command(
    name = "qclock",
    version,
    about = "Time-dependent oscillator scenarios and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Classical trajectory with Wronskian charges and, given `eta`, the invariant.
    Classical(RunArgs),
    /// Effective wave-packet dynamics, Casimir and α clock.
    Gaussian(RunArgs),
    /// Split-step Schrödinger propagation with moments per output time.
    Pde(RunArgs),
    /// Reparametrize a trajectory by its synchronizing clock.
    Synchronize(RunArgs),
    /// Invariant, Schwarzian, symmetry and Casimir checks.
    Invariants(RunArgs),
    /// Effective dynamics against the split-step propagator.
    Compare(RunArgs),
    /// Finite-difference Poisson bracket relations.
    Brackets(RunArgs),
    /// Run every scenario listed in a batch file.
    Batch(BatchArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Scenario configuration (JSON).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Replace one entry of the tolerance table.
    #[arg(long = "tolerance-override", value_name = "KEY=VAL")]
    tolerance_override: Vec<String>,
}

#[derive(Args, Debug)]
struct BatchArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Number of scenarios run concurrently.
    #[arg(long, value_name = "N", default_value_t = 1)]
    jobs: usize,
}

/// Loads, overrides and validates a scenario, then runs it into `out`.
pub(crate) fn run_scenario(
    command: Command,
    mut cfg: ScenarioConfig,
    out: Option<&Path>,
    overrides: &[String],
) -> Result<report::Report, CliError> {
    for o in overrides {
        cfg.override_tolerance(o)?;
    }
    if let Some(out) = out {
        cfg.output.dir = out.to_string_lossy().into_owned();
    }
    cfg.resolve()?;
    let dir = PathBuf::from(&cfg.output.dir);
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    write_file(&dir.join("resolved_config.json"), &cfg.to_json())?;
    let artifacts = commands::run(command, &cfg)?;
    for (name, contents) in &artifacts.files {
        write_file(&dir.join(name), contents)?;
    }
    write_file(&dir.join("report.json"), &artifacts.report.to_json())?;
    Ok(artifacts.report)
}

fn dispatch(sub: Sub) -> Result<u8, CliError> {
    let (command, args) = match sub {
        Sub::Batch(b) => {
            return batch::run_batch(
                &b.run.config,
                b.run.out.as_deref(),
                &b.run.tolerance_override,
                b.jobs,
            )
        }
        Sub::Classical(a) => (Command::Classical, a),
        Sub::Gaussian(a) => (Command::Gaussian, a),
        Sub::Pde(a) => (Command::Pde, a),
        Sub::Synchronize(a) => (Command::Synchronize, a),
        Sub::Invariants(a) => (Command::Invariants, a),
        Sub::Compare(a) => (Command::Compare, a),
        Sub::Brackets(a) => (Command::Brackets, a),
    };
    let cfg = ScenarioConfig::load(&args.config)?;
    let report = run_scenario(command, cfg, args.out.as_deref(), &args.tolerance_override)?;
    print!("{}", report.describe());
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qclock: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
