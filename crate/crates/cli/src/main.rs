//! `qcorr` command-line harness.
//!
//! Exit codes: 0 success, 1 property violation, 2 input error.

mod commands;
mod config;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::{
    BoundsArgs, CapacityArgs, FuzzArgs, GenCommand, MeasureArgs, RecoverArgs, Status, SweepArgs,
};
use config::RunConfig;

#[derive(Parser, Debug)]
#[command(
    name = "qcorr",
    version,
    about = "Entropic correlation measures, bounds and recovery maps"
)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (capped by QCORR_THREADS when set).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Tolerance override, e.g. `--tol fr=1e-7`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    tol: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one correlation measure on a state file.
    Measure(MeasureArgs),
    /// Faithfulness sweep of a measure under local truncations.
    Sweep(SweepArgs),
    /// Check continuity bounds on random state pairs.
    Bounds(BoundsArgs),
    /// Constrained entanglement-assisted capacity of a channel.
    Capacity(CapacityArgs),
    /// Search for a recovery channel B → BC.
    Recover(RecoverArgs),
    /// Run registered property checks on random samples.
    Fuzz(FuzzArgs),
    /// Write random or named states, channels and operators.
    #[command(subcommand)]
    Gen(GenCommand),
}

fn thread_count(requested: Option<usize>) -> Result<Option<usize>> {
    let cap = match std::env::var("QCORR_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .context("QCORR_THREADS must be a positive integer")?,
        ),
        Err(_) => None,
    };
    let n = match (requested, cap) {
        (Some(r), Some(c)) => Some(r.min(c)),
        (r, c) => r.or(c),
    };
    if n == Some(0) {
        anyhow::bail!("thread count must be positive");
    }
    Ok(n)
}

fn run(cli: Cli) -> Result<Status> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    qcorr::set_tolerances(config.tolerances(&cli.tol)?);
    if let Some(n) = thread_count(cli.threads.or(config.threads))? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    match &cli.command {
        Command::Measure(a) => commands::measure(&config::resolve(a, &config, "measure")?),
        Command::Sweep(a) => commands::sweep(&config::resolve(a, &config, "sweep")?),
        Command::Bounds(a) => commands::bounds(&config::resolve(a, &config, "bounds")?),
        Command::Capacity(a) => commands::capacity(&config::resolve(a, &config, "capacity")?),
        Command::Recover(a) => commands::recover(&config::resolve(a, &config, "recover")?),
        Command::Fuzz(a) => commands::fuzz(&config::resolve(a, &config, "fuzz")?),
        Command::Gen(g) => commands::gen(g, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
