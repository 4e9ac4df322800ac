//! `segre-shell`: generate posets, verify EL-labelings and cross-check
//! Möbius numbers, rank-selected invariants and permutation counts.
//!
//! Exit status: 0 success, 1 a check failed, 2 usage or input error,
//! 3 enumeration budget exceeded.

mod commands;
mod input;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use segre_core::shellability::DEFAULT_BUDGET;

use crate::input::InputArgs;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "segre-shell", version, about = "Segre powers of graded posets and their EL-labelings")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. Tables truncate witness lists to 5 entries.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Maximum number of chains any single enumeration may visit.
    #[arg(long, global = true, env = "SEGRE_SHELL_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a poset as JSON, or as a Graphviz Hasse diagram with --dot.
    Gen {
        #[command(flatten)]
        input: InputArgs,
        /// Hasse diagram with decreasing chains drawn bold.
        #[arg(long)]
        dot: bool,
    },
    /// Verify that the labeling is an EL-labeling.
    CheckEl {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Count or list maximal chains.
    Chains {
        #[command(flatten)]
        input: InputArgs,
        /// Only chains whose label word has no ascent.
        #[arg(long)]
        decreasing: bool,
        /// List the chains, not just their number.
        #[arg(long)]
        list: bool,
    },
    /// μ(0̂, 1̂) by recursion and by the reduced Euler characteristic.
    Mobius {
        #[command(flatten)]
        input: InputArgs,
    },
    /// α̃, β̃ and μ(P_J) for each rank selection J, by every available route.
    Invariants {
        #[command(flatten)]
        input: InputArgs,
        /// Rank selection such as `1,3`; repeatable. Default: all of them.
        #[arg(long = "J", value_name = "RANKS")]
        j: Vec<String>,
    },
    /// Counts of t-tuples of permutations with no common ascent.
    Perm {
        #[command(subcommand)]
        which: PermCommand,
    },
    /// Run the cross-check matrix and report every row.
    VerifyAll {
        /// Restrict to one family (boolean, subspace, fig1, fig3) or subject.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum PermCommand {
    /// w_n^(t)(J).
    W {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long = "J", value_name = "RANKS")]
        j: Option<String>,
    },
    /// W_n^(t)(q)(J), weighted by q^inv.
    Wq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        q: u64,
        #[arg(long = "J", value_name = "RANKS")]
        j: Option<String>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] segre_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(segre_core::Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

/// Whether every check a command ran came out as expected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

pub struct Settings {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub budget: u64,
}

fn run(cli: Cli) -> Result<Status, CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let settings = Settings { format: cli.format, out: cli.out, budget: cli.budget };
    match cli.command {
        Command::Gen { input, dot } => commands::gen(&settings, &input, dot),
        Command::CheckEl { input } => commands::check_el(&settings, &input),
        Command::Chains { input, decreasing, list } => commands::chains(&settings, &input, decreasing, list),
        Command::Mobius { input } => commands::mobius(&settings, &input),
        Command::Invariants { input, j } => commands::invariants(&settings, &input, &j),
        Command::Perm { which: PermCommand::W { n, t, j } } => commands::perm(&settings, n, t, None, j.as_deref()),
        Command::Perm { which: PermCommand::Wq { n, t, q, j } } => commands::perm(&settings, n, t, Some(q), j.as_deref()),
        Command::VerifyAll { only } => verify::verify_all(&settings, only.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
