mod commands;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use bidsched_core::threshold::Mode;
use bidsched_core::SolverConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::files::Failure;

/// Threshold budgets, tender synthesis and auction simulation.
///
/// Exit codes: 0 success, 1 synthesis failed, 2 bad input, 3 solver error,
/// 4 initial vertex pruned.
#[derive(Debug, Parser)]
#[command(name = "bidsched", version)]
struct Cli {
    #[command(flatten)]
    solver: SolverArgs,

    /// Directory for output files.
    #[arg(long, global = true, default_value = "bidsched-out")]
    out: PathBuf,

    /// Also write a Graphviz rendering with colored targets and chosen edges.
    #[arg(long, global = true)]
    emit_dot: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Strategy iteration over rationals (default).
    #[arg(long, global = true, conflicts_with = "iterative")]
    exact: bool,
    /// Floating-point value iteration.
    #[arg(long, global = true)]
    iterative: bool,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    max_iterations: Option<usize>,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if self.iterative {
            cfg.mode = Mode::Iterative;
        }
        if let Some(t) = self.tolerance {
            cfg.tolerance = t;
        }
        if let Some(m) = self.max_iterations {
            cfg.max_iterations = m;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Strong,
    Aa,
    Ag,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AdversaryArg {
    Random,
    Zero,
    Greedy,
    Spoiler,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Threshold budgets for every objective in a file.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        /// One objective or a JSON array of objectives.
        #[arg(long)]
        objectives: PathBuf,
    },
    /// Synthesize a pair of tenders.
    Synth {
        #[arg(long)]
        graph: PathBuf,
        /// JSON array of two objectives.
        #[arg(long)]
        objectives: PathBuf,
        #[arg(long, value_enum, default_value = "strong")]
        mode: ModeArg,
        #[arg(long)]
        contract: Option<PathBuf>,
    },
    /// Compose two tenders, or one tender and an adversary.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        /// Tender files; the first plays player 1.
        #[arg(long = "tender", required = true, num_args = 1)]
        tenders: Vec<PathBuf>,
        /// Objectives to judge the run against.
        #[arg(long)]
        objectives: Option<PathBuf>,
        /// Initial budget of player 1 as p/q.
        #[arg(long)]
        split: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        /// Replace player 2 by an adversary.
        #[arg(long, value_enum)]
        adversary: Option<AdversaryArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate or load a one-way grid, synthesize and simulate.
    Grid {
        /// Grid specification; generator flags are used when absent.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[arg(long, default_value_t = 8)]
        cols: usize,
        #[arg(long, default_value_t = 0.15)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "strong")]
        mode: ModeArg,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        split: Option<String>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("BIDSCHED_LOG", "warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
