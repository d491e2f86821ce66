//! Command-line front end for `nabla-green`.
//!
//! Problems come in as JSON ([`config::ProblemConfig`]) through `--config` or
//! stdin; tables go out as CSV through `--out` or stdout.

pub mod commands;
pub mod config;
pub mod output;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{Check, CHECKS};
pub use config::{ConfigError, ProblemConfig};

/// Environment variable overriding every verification tolerance.
pub const TOLERANCE_ENV: &str = "NABLA_GREEN_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("argument `{arg}`: {message}")]
    Argument { arg: String, message: String },
    #[error("{0}")]
    Solver(#[from] nabla_green::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("verification failed: check {index} ({name}) out of tolerance")]
    Verify { index: usize, name: &'static str },
}

impl CliError {
    /// 1 for input the tool or the solvers reject, 2 for singular problems,
    /// 10 + index for the first failed verification check, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        use nabla_green::Error as E;
        match self {
            CliError::Config(_)
            | CliError::Argument { .. }
            | CliError::Solver(
                E::InvalidGrid { .. }
                | E::InvalidOrder { .. }
                | E::InvalidOperator(_)
                | E::InvalidClosure(_)
                | E::InvalidBoundary(_)
                | E::NonPositiveP { .. },
            ) => 1,
            CliError::Solver(E::NearSingular { .. } | E::DegenerateDenominator { .. } | E::SingularSystem { .. }) => 2,
            CliError::Verify { index, .. } => 10 + *index as i32,
            CliError::Solver(_) | CliError::Io(_) | CliError::Csv(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nabla-green", version, about = "Nabla fractional boundary value problems and Green's functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct IoArgs {
    /// JSON problem config; read from stdin when absent
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of H_ν(a+m, a) for m = 0..len-1; takes nu=..., len=..., a=...
    Monomial {
        #[arg(value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cauchy function x(t, s) of the configured operator
    Cauchy(IoArgs),
    /// Solve the configured initial value problem
    SolveIvp(IoArgs),
    /// Solve the configured boundary value problem
    SolveBvp(IoArgs),
    /// Green's function table, from a config or the conjugate closed form
    Greens {
        /// Closed form for the (2,1) conjugate problem; takes a=..., b=..., nu=...
        #[arg(long)]
        conjugate: bool,
        #[arg(value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Cross-check every solver against the dense oracle and report residuals
    Verify(IoArgs),
}

/// Runs the tool and returns its exit code. `tolerance` is the raw value of
/// [`TOLERANCE_ENV`], if set.
pub fn run<I, T>(argv: I, tolerance: Option<String>, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match commands::execute(&cli.command, tolerance.as_deref(), stdin, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
