//! `mcpp`: exact tools for multiple-choice polynomial programs.

mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Core(mcpp::Error),
}

impl From<mcpp::Error> for CliError {
    fn from(e: mcpp::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 2 validation, 3 infeasible or guard, 4 internal.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(mcpp::Error::GuardExceeded { .. })
            | CliError::Core(mcpp::Error::Infeasible)
            | CliError::Core(mcpp::Error::Unbounded) => 3,
            CliError::Core(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(m) => format!("parse error: {m}"),
            CliError::Core(e) => e.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    Jointree,
    Cap,
    Affine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PointSetKind {
    /// 0-1 points over the coordinate family.
    Sh,
    /// 0-1 points of the multilinear polytope.
    Mp,
    /// Vertices of the companion polytope for a transversal.
    Leq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Lp,
    Brute,
}

#[derive(Debug, Parser)]
#[command(
    name = "mcpp",
    version,
    about = "Exact polytope tools for multiple-choice polynomial programs"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub output: OutputFormat,
    /// Size limit for enumerations (points or coordinates, per command).
    #[arg(long, global = true)]
    pub guard: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an instance file.
    Validate {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Print H(V, E), acyclicity and a join tree.
    Hypergraph {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Print a linear description: the join-tree or pairwise relaxation, or the affine hull.
    Hrep {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "jointree")]
        system: SystemKind,
        /// Transversal D as 1-based indices, e.g. `2,4`; defaults to the first index of every block.
        #[arg(long)]
        transversal: Option<String>,
    },
    /// List the 0-1 points of a polytope.
    Enumerate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "sh")]
        set: PointSetKind,
        #[arg(long)]
        transversal: Option<String>,
    },
    /// Certify an inequality file against the matching vertex set.
    Certify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        inequality: PathBuf,
        #[arg(long)]
        transversal: Option<String>,
    },
    /// Lift a multilinear inequality through a selection, e.g. `--selection '[[1],[4,5]]'`.
    Lift {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        inequality: PathBuf,
        #[arg(long)]
        selection: String,
    },
    /// Compare the intersection of two parts with the polytope of the whole.
    DecomposeCheck {
        #[arg(long)]
        instance: PathBuf,
        /// `{"vertices": [1,2], "edges": [[1,2]]}` with 1-based block numbers.
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Run every theorem check on the built-in battery.
    VerifyTheorems {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = mcpp::verify::DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Solve exactly; ties go to the lexicographically first choice.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            match cli.output {
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&out.json).expect("json value"))
                }
                OutputFormat::Text => print!("{}", out.text),
            }
            if let Some(failure) = out.failure {
                eprintln!("error: {failure}");
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
