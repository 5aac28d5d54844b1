//! Command-line driver for `rhocalc`: radius computation, positivity
//! checks, bound verification, sharpness curves, randomized scans and
//! identity regression runs.
//!
//! Exit codes are stable: 0 success, 2 input error, 3 nonconvergence,
//! 4 hypothesis violation, 5 identity-contract breach.

pub mod campaign;
pub mod commands;
pub mod config;
mod output;

use rhocalc::Error;
use thiserror::Error;

pub use config::{Cli, Command, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoConvergence(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("identity contract breached: {0}")]
    IdentityBreach(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::NoConvergence(_) => 3,
            CliError::Hypothesis(_) => 4,
            CliError::IdentityBreach(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } => CliError::NoConvergence(e.to_string()),
            Error::Hypothesis { .. } => CliError::Hypothesis(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("I/O error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(format!("CSV error: {e}"))
    }
}

/// Runs the configured command.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match config.command {
        Command::Radius => commands::cmd_radius(config),
        Command::Check => commands::cmd_check(config),
        Command::Bound => commands::cmd_bound(config),
        Command::Sharpness => commands::cmd_sharpness(config),
        Command::Scan => commands::cmd_scan(config),
        Command::Identities => commands::cmd_identities(config),
    }
}
