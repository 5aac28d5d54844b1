//! Run configuration: command-line flags layered over an optional JSON
//! config file layered over defaults.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Numerical ρ-radius of a matrix
    Radius,
    /// Boundary and disk positivity certificates for a matrix
    Check,
    /// Test ‖f(A)‖ ≤ k_ρ(|f(0)|) for a matrix and a rational function
    Bound,
    /// Sharpness witness and k_ρ curves
    Sharpness,
    /// Randomized verification campaign
    Scan,
    /// Regression run of the operator identities
    Identities,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "rhocalc", version, about = "Numerical rho-radius and von Neumann-type bounds for matrices")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Dilation constant ρ ≥ 1
    #[arg(long)]
    pub rho: Option<f64>,
    /// Boundary grid size (power of two, at least 16)
    #[arg(long)]
    pub grid: Option<usize>,
    /// Radius tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Master seed for randomized commands
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random samples
    #[arg(long)]
    pub samples: Option<usize>,
    /// Matrix JSON file
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Rational function or Blaschke product JSON file
    #[arg(long = "fn")]
    pub function: Option<PathBuf>,
    /// Output file (directory for `sharpness`)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON config file with the same fields as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a config file; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub rho: Option<f64>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub input_path: Option<PathBuf>,
    pub function_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
    }
}

pub const DEFAULT_RHO: f64 = 2.0;
pub const DEFAULT_GRID: usize = 1024;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 20240501;
pub const DEFAULT_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    /// `None` means the command's default (the figure set for `sharpness`).
    pub rho: Option<f64>,
    pub grid: usize,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub input_path: Option<PathBuf>,
    pub function_path: Option<PathBuf>,
    /// Not recorded in output comments, so artifacts do not depend on where
    /// they are written.
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Merges flags over the config file over defaults and validates the
    /// result.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let config = RunConfig {
            command: cli.command,
            rho: cli.rho.or(file.rho),
            grid: cli.grid.or(file.grid).unwrap_or(DEFAULT_GRID),
            tol: cli.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            samples: cli.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
            input_path: cli.input.or(file.input_path),
            function_path: cli.function.or(file.function_path),
            output_path: cli.out.or(file.output_path),
            format: cli.format.or(file.format).unwrap_or(Format::Json),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(rho) = self.rho {
            if !(rho.is_finite() && rho >= 1.0) {
                return Err(CliError::Input(format!("--rho must be >= 1, got {rho}")));
            }
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Input(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.grid < 16 || !self.grid.is_power_of_two() {
            return Err(CliError::Input(format!(
                "--grid must be a power of two >= 16, got {}",
                self.grid
            )));
        }
        if self.samples == 0 {
            return Err(CliError::Input("--samples must be at least 1".into()));
        }
        Ok(())
    }

    pub fn rho_or_default(&self) -> f64 {
        self.rho.unwrap_or(DEFAULT_RHO)
    }

    /// One-line description written as the leading comment of CSV output.
    pub fn comment_line(&self) -> String {
        format!(
            "# rhocalc {} seed={} config={}",
            serde_json::to_string(&self.command).unwrap_or_default().trim_matches('"'),
            self.seed,
            serde_json::to_string(self).unwrap_or_default()
        )
    }
}
