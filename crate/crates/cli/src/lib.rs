//! Command-line front end: configuration parsing, subcommand dispatch and
//! deterministic CSV/JSON output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod format;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use thiserror::Error;

pub use commands::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Physics(#[from] monopole_moments::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("integration aborted: {0}")]
    Aborted(monopole_moments::Error),
    #[error("oracle check failed: max relative error {0:e} is not below {1:e}")]
    OracleMismatch(f64, f64),
}

impl CliError {
    /// 1 for configuration and usage problems, 2 for numerical or degeneracy failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Physics(e) if e.is_usage() => 1,
            CliError::Physics(_) | CliError::Aborted(_) | CliError::OracleMismatch(..) => 2,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    1
                }
            };
        }
    };
    match commands::execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
