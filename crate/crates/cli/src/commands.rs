//! One function per subcommand.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use rhocalc::bounds::{k_drury, okubo_ando_bound, verify_norm_bound, BoundReport};
use rhocalc::contraction::{
    is_rho_contraction_boundary, is_rho_contraction_disk, psd_tolerance, rho_radius, PositivityCertificate,
    RadiusResult, Rho,
};
use rhocalc::funcalc::{BlaschkeSpec, RationalFunction};
use rhocalc::linalg::Matrix;
use rhocalc::witness::{k_curve, sharpness_scan, unit_grid, SharpnessRecord, FIGURE_POINTS, FIGURE_RHOS};

use crate::campaign::{run_identities, run_scan};
use crate::output::{sink, write_csv, write_json};
use crate::{CliError, Format, RunConfig};

/// Radial resolution of the disk characterization in `check`.
pub const DISK_RADIAL_STEPS: usize = 64;

fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    path.as_deref()
        .ok_or_else(|| CliError::Input(format!("this command needs {flag} <file>")))
}

pub fn read_matrix(path: &Path) -> Result<Matrix, CliError> {
    serde_json::from_str(&read_to_string(path)?)
        .map_err(|e| CliError::Input(format!("matrix file {}: {e}", path.display())))
}

/// Reads either the rational-function schema (`num`/`den`) or the Blaschke
/// schema (`zeros`/`phase`).
pub fn read_function(path: &Path) -> Result<RationalFunction, CliError> {
    let text = read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("function file {}: {e}", path.display())))?;
    let parsed = if value.get("zeros").is_some() {
        serde_json::from_value::<BlaschkeSpec>(value)
            .map_err(|e| e.to_string())
            .and_then(|spec| spec.to_rational().map_err(|e| e.to_string()))
    } else {
        serde_json::from_value::<RationalFunction>(value).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| CliError::Input(format!("function file {}: {e}", path.display())))
}

fn rho(config: &RunConfig) -> Result<Rho, CliError> {
    Ok(Rho::new(config.rho_or_default())?)
}

#[derive(Serialize)]
struct RadiusRow {
    rho: f64,
    value: f64,
    lo: f64,
    hi: f64,
    iterations: usize,
    grid_size: usize,
}

pub fn cmd_radius(config: &RunConfig) -> Result<(), CliError> {
    let a = read_matrix(required(&config.input_path, "--in")?)?;
    let rho = rho(config)?;
    let result: RadiusResult = rho_radius(&a, rho, config.tol, config.grid)?;
    let mut out = sink(config.output_path.as_deref())?;
    match config.format {
        Format::Json => write_json(&mut out, &result),
        Format::Csv => write_csv(
            &mut out,
            config,
            &[RadiusRow {
                rho: rho.value(),
                value: result.value,
                lo: result.lo(),
                hi: result.hi(),
                iterations: result.iterations,
                grid_size: result.certificates.hi.grid_size,
            }],
        ),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub rho: f64,
    pub boundary: PositivityCertificate,
    pub disk: PositivityCertificate,
    pub agree: bool,
}

#[derive(Serialize)]
struct CheckRow {
    characterization: &'static str,
    grid_size: usize,
    radial_steps: usize,
    worst_re: f64,
    worst_im: f64,
    min_eig: f64,
    tol: f64,
    positive: bool,
}

impl CheckRow {
    fn new(characterization: &'static str, c: &PositivityCertificate) -> Self {
        CheckRow {
            characterization,
            grid_size: c.grid_size,
            radial_steps: c.radial_steps.unwrap_or(0),
            worst_re: c.worst_point.re,
            worst_im: c.worst_point.im,
            min_eig: c.min_eig,
            tol: c.tol,
            positive: c.is_positive(),
        }
    }
}

/// Boundary certificate (adaptive from `--grid`) and disk certificate on the
/// boundary's final angular grid with [`DISK_RADIAL_STEPS`] rings.
pub fn check_report(a: &Matrix, rho: Rho, grid: usize) -> Result<CheckReport, CliError> {
    let tol = psd_tolerance(a);
    let boundary = is_rho_contraction_boundary(a, rho, grid, tol)?;
    let disk = is_rho_contraction_disk(a, rho, DISK_RADIAL_STEPS, boundary.grid_size, tol)?;
    Ok(CheckReport {
        rho: rho.value(),
        agree: boundary.verdict == disk.verdict,
        boundary,
        disk,
    })
}

pub fn cmd_check(config: &RunConfig) -> Result<(), CliError> {
    let a = read_matrix(required(&config.input_path, "--in")?)?;
    let report = check_report(&a, rho(config)?, config.grid)?;
    let mut out = sink(config.output_path.as_deref())?;
    match config.format {
        Format::Json => write_json(&mut out, &report),
        Format::Csv => write_csv(
            &mut out,
            config,
            &[CheckRow::new("boundary", &report.boundary), CheckRow::new("disk", &report.disk)],
        ),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BoundOutput {
    #[serde(flatten)]
    pub report: BoundReport,
    pub okubo_ando: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drury_k: Option<f64>,
}

pub fn cmd_bound(config: &RunConfig) -> Result<(), CliError> {
    let a = read_matrix(required(&config.input_path, "--in")?)?;
    let f = read_function(required(&config.function_path, "--fn")?)?;
    let rho = rho(config)?;
    let report = verify_norm_bound(&a, rho, &f)?;
    let drury_k = if rho.value() == 2.0 {
        Some(k_drury(report.abs_f0.min(1.0))?)
    } else {
        None
    };
    let output = BoundOutput {
        okubo_ando: okubo_ando_bound(rho),
        drury_k,
        report,
    };
    let mut out = sink(config.output_path.as_deref())?;
    match config.format {
        Format::Json => write_json(&mut out, &output),
        Format::Csv => write_csv(&mut out, config, &[output.report]),
    }
}

/// File name of the `k_ρ` curve for one ρ.
pub fn curve_file_name(rho: f64) -> String {
    format!("k_rho_{rho:.2}.csv")
}

pub const SHARPNESS_FILE: &str = "sharpness.csv";

/// Writes one `k_ρ` curve per ρ and a combined sharpness table into the
/// output directory, and returns the largest gap.
pub fn write_sharpness(config: &RunConfig, dir: &Path) -> Result<f64, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    let rhos: Vec<f64> = match config.rho {
        Some(r) => vec![r],
        None => FIGURE_RHOS.to_vec(),
    };
    let grid = unit_grid(FIGURE_POINTS);
    let mut records: Vec<SharpnessRecord> = Vec::new();
    for &r in &rhos {
        let rho = Rho::new(r)?;
        let mut out = sink(Some(&dir.join(curve_file_name(r))))?;
        write_csv(&mut out, config, &k_curve(rho))?;
        records.extend(sharpness_scan(rho, &grid)?);
    }
    let mut out = sink(Some(&dir.join(SHARPNESS_FILE)))?;
    write_csv(&mut out, config, &records)?;
    Ok(records.iter().map(|r| r.gap).fold(0.0, f64::max))
}

pub fn cmd_sharpness(config: &RunConfig) -> Result<(), CliError> {
    let dir = config.output_path.clone().unwrap_or_else(|| PathBuf::from("."));
    let max_gap = write_sharpness(config, &dir)?;
    println!("max gap {max_gap:e} (pass: {})", max_gap <= rhocalc::witness::SHARPNESS_TOL);
    Ok(())
}

/// Writes rows to the configured sink and the summary to stdout (or to
/// stderr when the rows themselves go to stdout).
fn write_rows_and_summary<R: Serialize, S: Serialize>(
    config: &RunConfig,
    rows: &[R],
    summary: &S,
) -> Result<(), CliError> {
    let mut out = sink(config.output_path.as_deref())?;
    match config.format {
        Format::Csv => write_csv(&mut out, config, rows)?,
        Format::Json => write_json(&mut out, &rows)?,
    }
    let summary = serde_json::to_string(summary).map_err(|e| CliError::Input(e.to_string()))?;
    if config.output_path.is_some() {
        println!("{summary}");
    } else {
        let _ = writeln!(std::io::stderr(), "{summary}");
    }
    Ok(())
}

pub fn cmd_scan(config: &RunConfig) -> Result<(), CliError> {
    let outcome = run_scan(rho(config)?, config.seed, config.samples);
    write_rows_and_summary(config, &outcome.rows, &outcome.summary)?;
    if !outcome.summary.unresolved.is_empty() {
        return Err(CliError::Hypothesis(format!(
            "samples {:?} failed their preconditions on every attempt",
            outcome.summary.unresolved
        )));
    }
    if outcome.summary.violations > 0 {
        log::error!("{} verifier violations", outcome.summary.violations);
    }
    Ok(())
}

pub fn cmd_identities(config: &RunConfig) -> Result<(), CliError> {
    let outcome = run_identities(config.seed, config.samples, config.grid)?;
    write_rows_and_summary(config, &outcome.rows, &outcome.maxima)?;
    if let Some(worst) = outcome.breaches().next() {
        let replay = serde_json::to_string(&worst.worst).map_err(|e| CliError::Input(e.to_string()))?;
        return Err(CliError::IdentityBreach(format!(
            "{:?}: residual {:e} exceeds contract by factor {:.3}; input {replay}",
            worst.identity, worst.max_residual, worst.max_ratio
        )));
    }
    Ok(())
}
