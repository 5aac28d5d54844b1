//! The numerical ρ-radius `w_ρ(A) = inf{a > 0 : A/a is a ρ-contraction}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::scan::{coarse_to_fine, node_angle, DefectParts};
use super::{boundary_certificate_on_grid, PositivityCertificate, Rho, Verdict, GRID_CAP, REFINE_TOL};
use crate::linalg::{cholesky_succeeds, hermitian_eigenvalues_raw, op_norm, spectral_radius, Matrix};
use crate::{Error, Result};

pub const DEFAULT_RADIUS_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Certificates at both ends of the final bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificatePair {
    pub lo: PositivityCertificate,
    pub hi: PositivityCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    /// Midpoint of `bracket`.
    pub value: f64,
    pub bracket: (f64, f64),
    /// Total bisection steps.
    pub iterations: usize,
    pub certificates: CertificatePair,
}

impl RadiusResult {
    pub fn lo(&self) -> f64 {
        self.bracket.0
    }

    pub fn hi(&self) -> f64 {
        self.bracket.1
    }
}

/// `w_ρ(A)` with the default tolerance and grid.
pub fn rho_radius_default(a: &Matrix, rho: Rho) -> Result<RadiusResult> {
    rho_radius(a, rho, DEFAULT_RADIUS_TOL, super::DEFAULT_GRID)
}

fn trivial_certificate(grid_size: usize, tol: f64) -> PositivityCertificate {
    PositivityCertificate {
        grid_size,
        radial_steps: None,
        worst_point: Complex64::new(1.0, 0.0),
        min_eig: 1.0,
        tol,
        verdict: Verdict::Positive,
    }
}

/// Feasibility of `A/a` at a single circle node, decided by a Cholesky
/// factorization of `D(σ_k) + ε_psd(A/a)·I`.
struct NodeOracle<'a> {
    parts: &'a DefectParts,
    norm: f64,
    buf: Vec<Complex64>,
}

impl NodeOracle<'_> {
    fn feasible(&mut self, k: usize, size: usize, a: f64) -> bool {
        self.feasible_at(node_angle(k, size), a)
    }

    fn feasible_at(&mut self, theta: f64, a: f64) -> bool {
        let inv = 1.0 / a;
        let tol = 1e-9 * (self.norm * inv).powi(2).max(1.0);
        let (sin, cos) = theta.sin_cos();
        self.parts.fill(1.0, cos, sin, inv, &mut self.buf);
        cholesky_succeeds(&mut self.buf, self.parts.n, tol)
    }
}

struct Bracket {
    lo: f64,
    hi: f64,
    iterations: usize,
    /// Angle of the node that last raised the bracket.
    peak: Option<f64>,
}

/// Computes `w_ρ(A)` to absolute accuracy `tol` with respect to a boundary
/// grid that starts at `grid_size` nodes and doubles (up to
/// `max(grid_size, 16384)`) while the bracket still moves.
///
/// The search starts from the lower bound `max(r(A), ‖A‖/ρ)`. Every node
/// whose defect is not positive at the current upper end is bisected
/// individually between that end and `‖A‖`; the bracket is the largest such
/// node threshold. A final pass confirms that all nodes are feasible at the
/// upper end, and a golden-section search between the neighbours of the
/// worst node catches a maximum that falls between grid points. In that case
/// the lower certificate, which is evaluated on the grid, can read positive.
/// For `ρ = 1` the value is `‖A‖`.
pub fn rho_radius(a: &Matrix, rho: Rho, tol: f64, grid_size: usize) -> Result<RadiusResult> {
    rho_radius_with(a, rho, tol, grid_size, DEFAULT_MAX_ITER)
}

pub(crate) fn rho_radius_with(
    a: &Matrix,
    rho: Rho,
    tol: f64,
    grid_size: usize,
    max_iter: usize,
) -> Result<RadiusResult> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("radius tolerance must be positive, got {tol}")));
    }
    if grid_size < 16 {
        return Err(Error::invalid(format!("boundary grid needs at least 16 points, got {grid_size}")));
    }
    if a.is_zero() {
        let cert = trivial_certificate(grid_size, 1e-9);
        return Ok(RadiusResult {
            value: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
            certificates: CertificatePair {
                lo: cert.clone(),
                hi: cert,
            },
        });
    }
    let norm = op_norm(a);
    let certify = |scale: f64, size: usize| {
        let scaled = a.scale_real(1.0 / scale);
        let eps = 1e-9 * (norm / scale).powi(2).max(1.0);
        boundary_certificate_on_grid(&scaled, rho, size, eps)
    };

    if rho.value() == 1.0 {
        let cert = certify(norm, grid_size)?;
        return Ok(RadiusResult {
            value: norm,
            bracket: (norm, norm),
            iterations: 0,
            certificates: CertificatePair {
                lo: cert.clone(),
                hi: cert,
            },
        });
    }

    let floor = spectral_radius(a)?.max(norm / rho.value());
    let parts = DefectParts::new(a, rho);
    let mut oracle = NodeOracle {
        parts: &parts,
        norm,
        buf: vec![Complex64::new(0.0, 0.0); a.dim() * a.dim()],
    };
    let mut bracket = Bracket {
        lo: floor,
        hi: floor,
        iterations: 0,
        peak: None,
    };

    let raise = |oracle: &mut NodeOracle, bracket: &mut Bracket, k: usize, size: usize| -> Result<bool> {
        if oracle.feasible(k, size, bracket.hi) {
            return Ok(false);
        }
        let mut lo = bracket.hi;
        let mut hi = norm;
        let mut doublings = 0;
        while !oracle.feasible(k, size, hi) {
            doublings += 1;
            if doublings > 3 {
                return Err(Error::NoConvergence {
                    what: "rho_radius",
                    iterations: bracket.iterations,
                    detail: format!(
                        "defect at node {k}/{size} is not positive at {hi} = {}·‖A‖; \
                         the operator norm should always be feasible",
                        hi / norm
                    ),
                });
            }
            lo = hi;
            hi *= 2.0;
        }
        let mut steps = 0;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || steps >= max_iter {
                return Err(Error::NoConvergence {
                    what: "rho_radius",
                    iterations: bracket.iterations,
                    detail: format!("bracket [{lo}, {hi}] at node {k}/{size} cannot reach width {tol}"),
                });
            }
            steps += 1;
            if oracle.feasible(k, size, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        bracket.iterations += steps;
        bracket.lo = lo;
        bracket.hi = hi;
        bracket.peak = Some(node_angle(k, size));
        Ok(true)
    };

    let mut size = grid_size;
    for k in coarse_to_fine(size) {
        raise(&mut oracle, &mut bracket, k, size)?;
    }
    let cap = grid_size.max(GRID_CAP);
    while size * 2 <= cap {
        let before = bracket.hi;
        size *= 2;
        for k in (1..size).step_by(2) {
            raise(&mut oracle, &mut bracket, k, size)?;
        }
        if bracket.hi - before < REFINE_TOL {
            break;
        }
    }
    // nodes accepted at an earlier, smaller upper end are re-checked here
    loop {
        let mut changed = false;
        for k in 0..size {
            changed |= raise(&mut oracle, &mut bracket, k, size)?;
        }
        if !changed {
            break;
        }
    }

    if let Some(theta) = bracket.peak {
        refine_peak(&mut oracle, &mut bracket, theta, TAU / size as f64, norm, tol, max_iter);
    }

    let lo_cert = certify(bracket.lo, size)?;
    let hi_cert = certify(bracket.hi, size)?;
    Ok(RadiusResult {
        value: 0.5 * (bracket.lo + bracket.hi),
        bracket: (bracket.lo, bracket.hi),
        iterations: bracket.iterations,
        certificates: CertificatePair { lo: lo_cert, hi: hi_cert },
    })
}

/// Golden-section search for the largest per-angle threshold in
/// `[θ − h, θ + h]`, raising the bracket when an off-grid angle needs a
/// larger scale than every grid node.
fn refine_peak(
    oracle: &mut NodeOracle,
    bracket: &mut Bracket,
    theta: f64,
    h: f64,
    norm: f64,
    tol: f64,
    max_iter: usize,
) {
    let mut threshold = |angle: f64, bracket: &mut Bracket| -> (f64, f64) {
        let (mut lo, mut hi) = (0.0, norm);
        if !oracle.feasible_at(angle, hi) {
            return (hi, hi);
        }
        let mut steps = 0;
        while hi - lo > tol && steps < max_iter {
            let mid = 0.5 * (lo + hi);
            if oracle.feasible_at(angle, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
            steps += 1;
        }
        bracket.iterations += steps;
        (lo, hi)
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (theta - h, theta + h);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut t1 = threshold(x1, bracket);
    let mut t2 = threshold(x2, bracket);
    let mut best = if t1.1 > t2.1 { t1 } else { t2 };
    for _ in 0..60 {
        if b - a < 1e-10 {
            break;
        }
        if t1.1 < t2.1 {
            a = x1;
            x1 = x2;
            t1 = t2;
            x2 = a + ratio * (b - a);
            t2 = threshold(x2, bracket);
        } else {
            b = x2;
            x2 = x1;
            t2 = t1;
            x1 = b - ratio * (b - a);
            t1 = threshold(x1, bracket);
        }
        for t in [t1, t2] {
            if t.1 > best.1 {
                best = t;
            }
        }
    }
    if best.1 > bracket.hi {
        bracket.lo = best.0;
        bracket.hi = best.1;
    }
}

fn field_support(a: &Matrix, theta: f64) -> f64 {
    let n = a.dim();
    let h = a.scale(Complex64::from_polar(1.0, -theta)).re_part();
    *hermitian_eigenvalues_raw(h.into_vec(), n).last().expect("dim >= 1")
}

/// Numerical radius `max_θ λ_max(Re(e^{−iθ}A))`: a grid scan over
/// `angular_steps` angles followed by golden-section refinement around the
/// best node. Independent of the defect machinery.
pub fn numerical_radius_oracle(a: &Matrix, angular_steps: usize) -> Result<f64> {
    if angular_steps < 64 {
        return Err(Error::invalid(format!("oracle needs at least 64 angles, got {angular_steps}")));
    }
    let step = std::f64::consts::TAU / angular_steps as f64;
    let (best_k, best) = (0..angular_steps)
        .map(|k| (k, field_support(a, k as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let center = best_k as f64 * step;
    let (mut lo, mut hi) = (center - step, center + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = field_support(a, x1);
    let mut f2 = field_support(a, x2);
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = field_support(a, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = field_support(a, x1);
        }
    }
    Ok(best.max(f1).max(f2))
}

/// Scales `A` into the open disk: returns `(rA, r)` with
/// `r = min(1, (1 − margin)/r(A))` when `r(A) ≥ 1 − margin`, else `(A, 1)`.
pub fn retract_spectrum(a: &Matrix, margin: f64) -> Result<(Matrix, f64)> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::invalid(format!("margin must lie in (0, 1), got {margin}")));
    }
    let radius = spectral_radius(a)?;
    if radius < 1.0 - margin {
        return Ok((a.clone(), 1.0));
    }
    let r = ((1.0 - margin) / radius).min(1.0);
    Ok((a.scale_real(r), r))
}
