//! Seeded randomized suites shared by the `scan` and `identities` commands
//! and the acceptance tests.

use num_complex::Complex64;
use serde::Serialize;

use rhocalc::bounds::{rho_f_constant, CheckedContraction, RADIUS_CONTRACT_TOL};
use rhocalc::contraction::{boundary_identity_residual, cayley_identity_residual, Rho};
use rhocalc::funcalc::{herglotz_residual, poisson_identity_residual, BlaschkeSpec, BoundaryGrid};
use rhocalc::linalg::{op_norm, spectral_radius, Matrix};
use rhocalc::witness::{derive_seed, gaussian_matrix, random_blaschke_spec, random_contraction, SeededRng};
use rhocalc::{Error, Result};

/// Matrix dimensions drawn by the scan.
pub const SCAN_DIMS: (usize, usize) = (2, 4);
/// Largest Blaschke degree drawn by the scan.
pub const SCAN_MAX_DEGREE: usize = 5;
/// Redraws allowed when a sample fails a verifier precondition.
pub const MAX_RETRIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanCheck {
    /// `‖f(A)‖ ≤ k_ρ(|f(0)|)`
    NormBound,
    /// `w_ρ(f(A)) ≤ 1` for `f(0) = 0`
    ZeroPreservation,
    /// `w_{ρ_f}(f(A)) ≤ 1`
    CassierSuciu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    Blaschke,
    BlaschkeZeroAtOrigin,
}

/// One verifier outcome. `value` is `‖f(A)‖` for the norm bound and a
/// ρ-radius otherwise; `bound` is `k_ρ(|f(0)|)` or 1; `slack = bound − value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub sample: usize,
    pub attempt: usize,
    pub dim: usize,
    pub degree: usize,
    pub function: FunctionKind,
    pub check: ScanCheck,
    pub rho: f64,
    pub rho_eff: f64,
    pub abs_f0: f64,
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Slack histogram bucket edges for norm-bound rows.
pub const SLACK_EDGES: [f64; 5] = [0.0, 1e-8, 1e-4, 1e-2, 1e-1];
const SLACK_LABELS: [&str; 6] = ["< 0", "[0, 1e-8)", "[1e-8, 1e-4)", "[1e-4, 1e-2)", "[1e-2, 1e-1)", ">= 1e-1"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlackBucket {
    pub label: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub rho: f64,
    pub seed: u64,
    pub samples: usize,
    pub rows: usize,
    pub violations: usize,
    /// Samples that failed a precondition on every attempt.
    pub unresolved: Vec<usize>,
    pub max_norm_fa: f64,
    pub slack_histogram: Vec<SlackBucket>,
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

fn sample_rows(rho: Rho, sample: usize, attempt: usize, seed: u64) -> Result<Vec<ScanRow>> {
    let mut rng = SeededRng::new(seed);
    let dim = rng.int_range(SCAN_DIMS.0, SCAN_DIMS.1);
    let degree = rng.int_range(1, SCAN_MAX_DEGREE);
    let a = random_contraction(rho, dim, derive_seed(seed, 1))?;
    let checked = CheckedContraction::new(a, rho)?;
    let mut rows = Vec::with_capacity(5);
    let row = |function, check, rho_eff, abs_f0, value: f64, bound: f64, tol: f64| ScanRow {
        sample,
        attempt,
        dim,
        degree,
        function,
        check,
        rho: rho.value(),
        rho_eff,
        abs_f0,
        value,
        bound,
        slack: bound - value,
        pass: value <= bound + tol,
    };
    for (kind, force_zero, spec_seed) in [
        (FunctionKind::Blaschke, false, derive_seed(seed, 2)),
        (FunctionKind::BlaschkeZeroAtOrigin, true, derive_seed(seed, 3)),
    ] {
        let f = random_blaschke_spec(degree, spec_seed, force_zero)?.to_rational()?;
        let report = checked.verify_norm_bound(&f)?;
        rows.push(ScanRow {
            pass: report.pass,
            ..row(
                kind,
                ScanCheck::NormBound,
                rho.value(),
                report.abs_f0,
                report.norm_fa,
                report.k_value,
                0.0,
            )
        });
        if force_zero {
            let w = checked.verify_zero_preservation(&f)?;
            rows.push(row(kind, ScanCheck::ZeroPreservation, rho.value(), report.abs_f0, w, 1.0, RADIUS_CONTRACT_TOL));
        }
        if !f.is_constant() {
            let rho_f = rho_f_constant(rho, report.abs_f0)?;
            let w = checked.verify_cassier_suciu(&f)?;
            rows.push(row(kind, ScanCheck::CassierSuciu, rho_f, report.abs_f0, w, 1.0, RADIUS_CONTRACT_TOL));
        }
    }
    Ok(rows)
}

/// Runs `samples` seeded samples at one ρ. Each sample draws a random
/// ρ-contraction and two random Blaschke products of a common degree (one
/// vanishing at the origin) and records every applicable verifier. A sample
/// whose precondition check fails is redrawn from a derived seed up to
/// [`MAX_RETRIES`] times and otherwise listed as unresolved.
pub fn run_scan(rho: Rho, seed: u64, samples: usize) -> ScanOutcome {
    let mut rows = Vec::new();
    let mut unresolved = Vec::new();
    for sample in 0..samples {
        let base = derive_seed(seed, sample as u64);
        let mut done = false;
        for attempt in 0..=MAX_RETRIES {
            let s = if attempt == 0 { base } else { derive_seed(base, 1000 + attempt as u64) };
            match sample_rows(rho, sample, attempt, s) {
                Ok(r) => {
                    rows.extend(r);
                    done = true;
                    break;
                }
                Err(e) => log::warn!("sample {sample} attempt {attempt}: {e}; redrawing"),
            }
        }
        if !done {
            log::error!("sample {sample}: preconditions failed on all {} attempts", MAX_RETRIES + 1);
            unresolved.push(sample);
        }
    }
    let summary = summarize(rho, seed, samples, &rows, unresolved);
    ScanOutcome { rows, summary }
}

fn summarize(rho: Rho, seed: u64, samples: usize, rows: &[ScanRow], unresolved: Vec<usize>) -> ScanSummary {
    let norm_rows: Vec<&ScanRow> = rows.iter().filter(|r| r.check == ScanCheck::NormBound).collect();
    let mut counts = vec![0usize; SLACK_EDGES.len() + 1];
    for r in &norm_rows {
        let bucket = SLACK_EDGES.iter().take_while(|&&e| r.slack >= e).count();
        counts[bucket] += 1;
    }
    ScanSummary {
        rho: rho.value(),
        seed,
        samples,
        rows: rows.len(),
        violations: rows.iter().filter(|r| !r.pass).count(),
        unresolved,
        max_norm_fa: norm_rows.iter().map(|r| r.value).fold(0.0, f64::max),
        slack_histogram: SLACK_LABELS
            .iter()
            .zip(counts)
            .map(|(label, count)| SlackBucket {
                label: label.to_string(),
                count,
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `2πP(σ,A) − (2−ρ)I = ρ(σ̄ − A*)^{-1}D(σ)(σ − A)^{-1}`
    BoundaryKernel,
    /// `S*D(z)S = Re(I + (2/ρ)AS)`
    Cayley,
    /// `γ_A(f) + f(0) = ∫ f P |dσ|`
    Poisson,
    /// Herglotz-type representation of `P(τ, γ_A(εf))`
    Herglotz,
}

pub const IDENTITIES: [Identity; 4] = [
    Identity::BoundaryKernel,
    Identity::Cayley,
    Identity::Poisson,
    Identity::Herglotz,
];

/// ε used for the Herglotz identity.
pub const HERGLOTZ_EPSILON: f64 = 0.9;
/// Smallest grid used for the Herglotz identity.
pub const HERGLOTZ_MIN_GRID: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityRow {
    pub sample: usize,
    pub identity: Identity,
    pub dim: usize,
    pub rho: f64,
    pub norm_a: f64,
    pub residual: f64,
    pub contract: f64,
    pub pass: bool,
}

/// Everything needed to replay one identity evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCase {
    pub sample: usize,
    pub identity: Identity,
    pub matrix: Matrix,
    pub rho: f64,
    /// `σ` for the boundary identity, `z` for Cayley, `τ` for Herglotz.
    #[serde(with = "rhocalc::json::complex")]
    pub point: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<BlaschkeSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub grid: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityMaximum {
    pub identity: Identity,
    pub max_residual: f64,
    /// Largest `residual / contract` ratio; at most 1 when the contract holds.
    pub max_ratio: f64,
    pub worst: IdentityCase,
}

#[derive(Debug, Clone)]
pub struct IdentityOutcome {
    pub rows: Vec<IdentityRow>,
    pub maxima: Vec<IdentityMaximum>,
}

impl IdentityOutcome {
    pub fn breaches(&self) -> impl Iterator<Item = &IdentityMaximum> {
        self.maxima.iter().filter(|m| m.max_ratio > 1.0)
    }
}

/// Gaussian matrix rescaled to the given spectral radius (to the given norm
/// when the draw is numerically nilpotent).
fn matrix_with_spectral_radius(dim: usize, rng: &mut SeededRng, target: f64) -> Result<Matrix> {
    let g = gaussian_matrix(dim, rng);
    let r = spectral_radius(&g)?;
    let scale = if r > 1e-8 { r } else { op_norm(&g) };
    Ok(g.scale_real(target / scale))
}

/// Inputs of one identity sample; sample 0 uses the zero matrix.
pub struct IdentitySample {
    pub a: Matrix,
    pub rho: Rho,
    pub sigma: Complex64,
    pub z: Complex64,
    pub tau: Complex64,
    pub f: BlaschkeSpec,
    pub f_zero: BlaschkeSpec,
}

pub fn identity_sample(seed: u64, sample: usize) -> Result<IdentitySample> {
    let mut rng = SeededRng::new(derive_seed(seed, sample as u64));
    let dim = rng.int_range(1, 4);
    let a = if sample == 0 {
        Matrix::zeros(2)
    } else {
        let target = rng.uniform_range(0.05, 0.95);
        matrix_with_spectral_radius(dim, &mut rng, target)?
    };
    let rho = Rho::new(rng.uniform_range(1.0, 4.0))?;
    let sigma = rng.unit_phase();
    let z = rng.in_disk(1.0);
    let tau = rng.unit_phase();
    let degree = rng.int_range(1, 3);
    let f = random_blaschke_spec(degree, rng.next_u64(), false)?;
    let f_zero = random_blaschke_spec(degree, rng.next_u64(), true)?;
    Ok(IdentitySample {
        a,
        rho,
        sigma,
        z,
        tau,
        f,
        f_zero,
    })
}

/// Evaluates the four identities on `samples` seeded samples. Contracts are
/// `1e-9·max(1,‖A‖²)` for the boundary and Cayley identities,
/// `1e-8·max(1,‖A‖)` for the Poisson representation and `1e-7·max(1,‖A‖)`
/// for the Herglotz representation at `ε = 0.9` on a grid of at least 4096
/// nodes.
pub fn run_identities(seed: u64, samples: usize, grid: usize) -> Result<IdentityOutcome> {
    let quad_grid = BoundaryGrid::new(grid)?;
    let herglotz_grid = BoundaryGrid::new(grid.max(HERGLOTZ_MIN_GRID))?;
    let mut rows = Vec::new();
    let mut maxima: Vec<Option<IdentityMaximum>> = vec![None; IDENTITIES.len()];
    for sample in 0..samples {
        let s = identity_sample(seed, sample)?;
        let norm = op_norm(&s.a);
        for (slot, identity) in IDENTITIES.iter().copied().enumerate() {
            let (residual, contract, point, function, epsilon, grid_used) = match identity {
                Identity::BoundaryKernel => (
                    boundary_identity_residual(&s.a, s.rho, s.sigma)?,
                    1e-9 * (norm * norm).max(1.0),
                    s.sigma,
                    None,
                    None,
                    0,
                ),
                Identity::Cayley => (
                    cayley_identity_residual(&s.a, s.rho, s.z)?,
                    1e-9 * (norm * norm).max(1.0),
                    s.z,
                    None,
                    None,
                    0,
                ),
                Identity::Poisson => (
                    poisson_identity_residual(&s.f.to_rational()?, &s.a, quad_grid)?,
                    1e-8 * norm.max(1.0),
                    Complex64::new(0.0, 0.0),
                    Some(s.f.clone()),
                    None,
                    quad_grid.size(),
                ),
                Identity::Herglotz => (
                    herglotz_residual(&s.f_zero.to_rational()?, &s.a, s.rho, s.tau, HERGLOTZ_EPSILON, herglotz_grid)?,
                    1e-7 * norm.max(1.0),
                    s.tau,
                    Some(s.f_zero.clone()),
                    Some(HERGLOTZ_EPSILON),
                    herglotz_grid.size(),
                ),
            };
            if !residual.is_finite() {
                return Err(Error::NoConvergence {
                    what: "identity residual",
                    iterations: sample,
                    detail: format!("{identity:?} residual is not finite"),
                });
            }
            rows.push(IdentityRow {
                sample,
                identity,
                dim: s.a.dim(),
                rho: s.rho.value(),
                norm_a: norm,
                residual,
                contract,
                pass: residual <= contract,
            });
            let ratio = residual / contract;
            let replace = maxima[slot].as_ref().is_none_or(|m| ratio > m.max_ratio);
            let max_residual = maxima[slot].as_ref().map_or(residual, |m| m.max_residual.max(residual));
            if replace {
                maxima[slot] = Some(IdentityMaximum {
                    identity,
                    max_residual,
                    max_ratio: ratio,
                    worst: IdentityCase {
                        sample,
                        identity,
                        matrix: s.a.clone(),
                        rho: s.rho.value(),
                        point,
                        function,
                        epsilon,
                        grid: grid_used,
                        residual,
                    },
                });
            } else if let Some(m) = maxima[slot].as_mut() {
                m.max_residual = max_residual;
            }
        }
    }
    Ok(IdentityOutcome {
        rows,
        maxima: maxima.into_iter().flatten().collect(),
    })
}
