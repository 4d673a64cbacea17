// SPDX-License-Identifier: Apache-2.0

//! Command-line pipeline driver. Every stage is a subcommand writing plain
//! CSV/JSON artifacts into the run's output directory, so any stage can be
//! inspected or substituted. Stages are idempotent and deterministic for a
//! fixed seed; a manifest records seeds, config, and input hashes.
//!
//! Exit codes: 0 ok, 1 io/internal, 2 usage, 3 data validation,
//! 4 missing upstream artifact. The `COLLABNET_THREADS` environment
//! variable caps worker threads.

mod commands;
mod error;
mod manifest;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "collabnet",
    version,
    about = "Collaboration-network analysis pipeline",
    propagate_version = true
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,

    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every stage.
#[derive(Args, Clone)]
struct RunArgs {
    /// Output directory for all artifacts
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Master seed for every randomized stage
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Restrict measures to the giant connected component
    #[arg(long, global = true)]
    gcc_only: bool,

    /// Quantile bin count for trend tables
    #[arg(long, value_name = "N", global = true, default_value_t = 10)]
    bins: usize,

    /// Number of trees in the decision forest
    #[arg(long, value_name = "N", global = true, default_value_t = 100)]
    trees: usize,

    /// Add group size as an extra predictor in the forest
    #[arg(long, global = true)]
    with_group_size: bool,

    /// Groups file (JSON lines); defaults to `<out>/groups.jsonl`
    #[arg(long, global = true, value_name = "PATH")]
    groups: Option<PathBuf>,

    /// Success file (JSON lines); defaults to `<out>/success.jsonl`
    #[arg(long, global = true, value_name = "PATH")]
    success: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset with planted measure-success signal
    Synth(commands::SynthArgs),
    /// Project the membership records into the collaboration graph
    Build,
    /// Compute the per-node network measures table
    Measures,
    /// Detect communities and compute attribute assortativity
    Communities,
    /// Correlation table and quantile trend tables
    Correlate(commands::CorrelateArgs),
    /// Train and evaluate the success-prediction forests
    Predict,
    /// Assemble the Markdown report from cached stage artifacts
    Report,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let paths = commands::RunPaths::new(&cli.run.out, cli.run.groups.clone(), cli.run.success.clone());
    let result = match &cli.command {
        Command::Synth(args) => commands::cmd_synth(&paths, &cli.run, args),
        Command::Build => commands::cmd_build(&paths, &cli.run),
        Command::Measures => commands::cmd_measures(&paths, &cli.run),
        Command::Communities => commands::cmd_communities(&paths, &cli.run),
        Command::Correlate(args) => commands::cmd_correlate(&paths, &cli.run, args),
        Command::Predict => commands::cmd_predict(&paths, &cli.run),
        Command::Report => commands::cmd_report(&paths, &cli.run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => err.exit_with_message(),
    }
}

impl CliError {
    fn exit_with_message(&self) -> ExitCode {
        eprintln!("error[E{}]: {}", self.code(), self);
        ExitCode::from(self.code())
    }
}
