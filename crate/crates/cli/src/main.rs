use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use fpdlab_core::script::{emit_report, execute, parse_script, RunConfig};

#[derive(Parser)]
#[command(name = "fpdlab", version, about = "Grades, finitistic dimensions and theorem checks for affine algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script and write its JSON report bundle.
    Run {
        script: PathBuf,
        /// Output path; `-` writes to standard output.
        #[arg(long, default_value = "-")]
        out: String,
        #[arg(long, default_value_t = 8)]
        power_cap: usize,
        #[arg(long, default_value_t = 12)]
        grade_bound: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Accept zero-dimensional ideals whose maximality is unconfirmed.
        #[arg(long)]
        assume_maximal: bool,
        /// Allow heights computed as dim R - dim R/p.
        #[arg(long)]
        equidimensional: bool,
        /// Treat the supplied maximal ideals as all of Max(R).
        #[arg(long)]
        exhaustive: bool,
    },
}

fn budget_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var("FPDLAB_BUDGET") {
        Ok(v) => v.trim().parse().map(Some).with_context(|| format!("FPDLAB_BUDGET must be a positive integer, got `{v}`")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(e).context("reading FPDLAB_BUDGET"),
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let Command::Run { script, out, power_cap, grade_bound, trials, seed, assume_maximal, equidimensional, exhaustive } =
        cli.command;
    let mut config = RunConfig { power_cap, grade_bound, trials, seed, assume_maximal, equidimensional, exhaustive, ..RunConfig::default() };
    if let Some(b) = budget_from_env()? {
        config.budget = b;
    }
    config.validate()?;
    let text = std::fs::read_to_string(&script).with_context(|| format!("reading {}", script.display()))?;
    let parsed = parse_script(&text).with_context(|| format!("{}", script.display()))?;
    let bundle = execute(&parsed, &config)?;
    emit_report(&bundle, &out)?;
    Ok(bundle.exit_code())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("fpdlab: {e:#}");
            ExitCode::from(1)
        }
    }
}
