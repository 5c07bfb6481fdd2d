//! `memlen`: simulate processes, run memory-length estimators over checkpoints, summarize runs.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod config;
mod estimate;
mod manifest;
mod report;
mod simulate;

/// Marks an error as an internal invariant violation (exit code 3).
#[derive(Debug)]
pub struct Internal(pub String);

impl std::fmt::Display for Internal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "internal invariant violated: {}", self.0)
    }
}

impl std::error::Error for Internal {}

#[derive(Parser, Debug)]
#[command(name = "memlen", version, about = "Pathwise memory-length estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate sample paths from a model.
    Simulate(SimulateArgs),
    /// Run an estimator over a schedule of checkpoints.
    Estimate(EstimateArgs),
    /// Summarize one or more estimate runs.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Txt,
    Bin,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Txt => "txt",
            Format::Bin => "bin",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    Backward,
    ForwardP,
    ForwardR,
    CondprobFm,
    CondprobMarkov,
}

impl SchemeArg {
    pub fn name(self) -> &'static str {
        match self {
            SchemeArg::Backward => "backward",
            SchemeArg::ForwardP => "forward-p",
            SchemeArg::ForwardR => "forward-r",
            SchemeArg::CondprobFm => "condprob-fm",
            SchemeArg::CondprobMarkov => "condprob-markov",
        }
    }

    pub fn is_condprob(self) -> bool {
        matches!(self, SchemeArg::CondprobFm | SchemeArg::CondprobMarkov)
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Model: a JSON file, inline JSON, or a preset name.
    #[arg(long)]
    pub model: String,
    /// Path length is n + 1 symbols.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub replicas: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "txt")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Model: a JSON file, inline JSON, or a preset name. Paths are generated unless --input is given.
    #[arg(long)]
    pub model: Option<String>,
    /// Sample file(s), oldest symbol first; one replica per file.
    #[arg(long, num_args = 1..)]
    pub input: Vec<PathBuf>,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.24)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Largest checkpoint; defaults to the last checkpoint or the input length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated list, or `start:end:step`.
    #[arg(long)]
    pub checkpoints: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub replicas: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Conditional-probability match tolerance in the sup norm.
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
    /// Leave the `ms` column empty so that output is byte-for-byte reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Estimate run directories.
    #[arg(required = true)]
    pub dirs: Vec<PathBuf>,
    /// Write summary.csv and convergence.csv here instead of printing them.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate(a) => simulate::run(&a),
        Command::Estimate(a) => estimate::run(&a),
        Command::Report(a) => report::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("memlen: {e:#}");
            if e.downcast_ref::<Internal>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
        Err(_) => ExitCode::from(3),
    }
}
