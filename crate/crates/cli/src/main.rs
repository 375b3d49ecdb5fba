//! `frameweave`: bounds, woven certification, sufficient conditions, subspace
//! geometry, frame constructions and the random explorer from the shell.
//!
//! Exit codes: 0 positive verdict or success, 1 negative verdict, 2 usage,
//! parse and parameter errors, 3 a required frame or premise failed, 4 the
//! enumeration limit was exceeded.

mod commands;
mod files;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frameweave::Tolerance;
use thiserror::Error;

pub const TOL_ENV: &str = "FRAMEWEAVE_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] frameweave::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use frameweave::Error as E;
        match self {
            CliError::Core(E::NotAFrame { .. } | E::NotWovenPremise) => 3,
            CliError::Core(E::EnumerationLimitExceeded { .. }) => 4,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "frameweave", version, about = "Woven finite frames in R^n")]
struct Cli {
    /// Record wall-clock time in runtime_ms (reports are otherwise byte-stable).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal frame bounds of a family.
    Bounds {
        file: PathBuf,
        /// Bounds relative to the span of the family instead of R^n.
        #[arg(long)]
        span: bool,
    },
    /// Exhaustive woven certification of two families.
    Woven(WovenArgs),
    /// Evaluate a sufficient condition for woven-ness.
    Check {
        #[command(subcommand)]
        condition: Condition,
    },
    /// Gap and angle cosines between two spans, or between the spans of two
    /// complementary weavings when --sigma is given.
    Geometry {
        first: PathBuf,
        second: PathBuf,
        /// Index string ("101": indices 1 and 3) or binary mask ("0b101": bits 0 and 2).
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Build a new family and write it as a frame file.
    Construct {
        #[command(subcommand)]
        kind: Construction,
    },
    /// Random search: is a frame woven with its frame-operator image (1) or
    /// its canonical dual (2)?
    Explore {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        problem: u8,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra frame files examined after the random trials.
        #[arg(long)]
        include: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct WovenArgs {
    first: PathBuf,
    second: PathBuf,
    /// Treat the inputs as frame sequences: only nontrivial subsets count.
    #[arg(long, conflicts_with = "policy")]
    sequences: bool,
    #[arg(long, value_enum, default_value_t = PolicyArg::All)]
    policy: PolicyArg,
    /// Largest number of vectors accepted for exhaustive enumeration.
    #[arg(long, default_value_t = frameweave::weaving::DEFAULT_ENUMERATION_LIMIT)]
    limit: usize,
    /// Worker threads (0 uses every core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    All,
    Nontrivial,
}

#[derive(Debug, Subcommand)]
enum Condition {
    /// F, G woven and H close to G.
    Perturb { f: PathBuf, g: PathBuf, h: PathBuf },
    /// F a frame and G close to F.
    Corollary { f: PathBuf, g: PathBuf },
    /// Energy condition on F and G.
    Normsum { f: PathBuf, g: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClosureArg {
    Zero,
    Wrap,
}

#[derive(Debug, Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Name recorded in the written file.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Construction {
    /// f_i - f_{i+1}
    Diff {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ClosureArg::Zero)]
        closure: ClosureArg,
        #[command(flatten)]
        output: Output,
    },
    /// alpha f_i + beta f_{i+1}
    Lincomb {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = ClosureArg::Zero)]
        closure: ClosureArg,
        #[command(flatten)]
        output: Output,
    },
    /// Canonical dual S^{-1} f_i.
    Dual {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Frame-operator image S f_i.
    Frameop {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Image T f_i under a square matrix T.
    Operator {
        file: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

fn tolerance_from_env() -> Result<Tolerance, CliError> {
    let Ok(raw) = std::env::var(TOL_ENV) else {
        return Ok(Tolerance::default());
    };
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    let [rank, frame] = parts[..] else {
        return Err(CliError::Usage(format!(
            "{TOL_ENV} must be two comma-separated reals, got {raw:?}"
        )));
    };
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("{TOL_ENV}: {s:?} is not a number")))
    };
    Ok(Tolerance::new(parse(rank)?, parse(frame)?)?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match tolerance_from_env().and_then(|tol| commands::run(cli, &tol)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
