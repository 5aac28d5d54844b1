//! ρ-contractions: the boundary and closed-disk positivity characterizations,
//! the operator identities behind them, and the numerical ρ-radius.
//!
//! A matrix `A` is a ρ-contraction (admits a unitary ρ-dilation) iff for all
//! `σ` on the unit circle
//!
//! ```text
//! I − 2(1 − 1/ρ)·Re(σ̄A) − (2/ρ − 1)·A*A ⪰ 0,
//! ```
//!
//! equivalently iff for all `z` in the closed disk
//!
//! ```text
//! I − 2(1 − 1/ρ)·Re(z̄A) − (1/ρ² − (1 − 1/ρ)²|z|²)·A*A ⪰ 0.
//! ```
//!
//! Throughout, `Re(M) = (M + M*)/2`.

mod radius;
mod scan;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, inverse, op_norm, resolvent, spectral_radius, Matrix};
use crate::{Error, Result};

pub use radius::{
    numerical_radius_oracle, retract_spectrum, rho_radius, rho_radius_default, CertificatePair, RadiusResult,
    DEFAULT_MAX_ITER, DEFAULT_RADIUS_TOL,
};
pub(crate) use scan::{coarse_to_fine, node_angle, DefectParts};

use scan::{boundary_min, MinTracker};

/// Default starting size of boundary grids.
pub const DEFAULT_GRID: usize = 1024;
/// Upper limit for adaptive doubling of boundary grids.
pub const GRID_CAP: usize = 16384;
/// Doubling stops once the minimum moves by less than this.
pub const REFINE_TOL: f64 = 1e-10;
/// `|σ| = 1` is accepted within this distance.
pub const UNIT_TOL: f64 = 1e-12;

/// A dilation constant `ρ ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Rho(f64);

impl Rho {
    pub fn new(rho: f64) -> Result<Rho> {
        if rho.is_finite() && rho >= 1.0 {
            Ok(Rho(rho))
        } else {
            Err(Error::invalid(format!("rho must be a finite number >= 1, got {rho}")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Rho {
    type Error = Error;
    fn try_from(v: f64) -> Result<Rho> {
        Rho::new(v)
    }
}

impl From<Rho> for f64 {
    fn from(r: Rho) -> f64 {
        r.0
    }
}

/// PSD tolerance `1e-9·max(1, ‖A‖²)` for defects built from `A`.
pub fn psd_tolerance(a: &Matrix) -> f64 {
    1e-9 * op_norm(a).powi(2).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Positive,
    Violated,
}

/// Grid-sampled evidence for a "for all σ" (or "for all z") positivity claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityCertificate {
    /// Number of points on the circle (angular steps for disk grids).
    pub grid_size: usize,
    /// Radial steps; present only for closed-disk certificates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial_steps: Option<usize>,
    #[serde(with = "crate::json::complex")]
    pub worst_point: Complex64,
    pub min_eig: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

impl PositivityCertificate {
    fn new(grid_size: usize, radial_steps: Option<usize>, worst_point: Complex64, min_eig: f64, tol: f64) -> Self {
        let verdict = if min_eig >= -tol {
            Verdict::Positive
        } else {
            Verdict::Violated
        };
        PositivityCertificate {
            grid_size,
            radial_steps,
            worst_point,
            min_eig,
            tol,
            verdict,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.verdict == Verdict::Positive
    }
}

fn check_unit(sigma: Complex64) -> Result<()> {
    if (sigma.norm() - 1.0).abs() > UNIT_TOL || !sigma.is_finite() {
        return Err(Error::invalid(format!("point {sigma} is not on the unit circle")));
    }
    Ok(())
}

fn require_spectrum_in_disk(a: &Matrix) -> Result<()> {
    let r = spectral_radius(a)?;
    if r < 1.0 {
        Ok(())
    } else {
        Err(Error::SpectrumNotInDisk { spectral_radius: r })
    }
}

/// `I − 2(1 − 1/ρ)·Re(σ̄A) − (2/ρ − 1)·A*A` for `|σ| = 1`.
pub fn boundary_defect(a: &Matrix, rho: Rho, sigma: Complex64) -> Result<Matrix> {
    check_unit(sigma)?;
    let r = rho.value();
    let re = a.scale(sigma.conj()).re_part();
    let out = Matrix::identity(a.dim()) - re.scale_real(2.0 * (1.0 - 1.0 / r)) - a.gram().scale_real(2.0 / r - 1.0);
    Ok(out.re_part())
}

/// `I − 2(1 − 1/ρ)·Re(z̄A) − (1/ρ² − (1 − 1/ρ)²|z|²)·A*A` for `|z| ≤ 1`.
pub fn disk_defect(a: &Matrix, rho: Rho, z: Complex64) -> Result<Matrix> {
    if !(z.norm() <= 1.0 + UNIT_TOL) {
        return Err(Error::invalid(format!("point {z} lies outside the closed unit disk")));
    }
    let r = rho.value();
    let q = 1.0 - 1.0 / r;
    let re = a.scale(z.conj()).re_part();
    let coeff = 1.0 / (r * r) - q * q * z.norm_sqr();
    let out = Matrix::identity(a.dim()) - re.scale_real(2.0 * q) - a.gram().scale_real(coeff);
    Ok(out.re_part())
}

pub(crate) fn poisson_kernel_unchecked(a: &Matrix, sigma: Complex64) -> Result<Matrix> {
    let r = linalg::resolvent_unguarded(a, sigma)?;
    Ok(r.scale(sigma).re_part().scale_real(1.0 / PI))
}

/// `P(σ, A) = (1/π)·Re(σ(σI − A)^{-1})`, defined for spectra inside the
/// open disk.
pub fn poisson_kernel(a: &Matrix, sigma: Complex64) -> Result<Matrix> {
    check_unit(sigma)?;
    require_spectrum_in_disk(a)?;
    let r = resolvent(a, sigma)?;
    Ok(r.scale(sigma).re_part().scale_real(1.0 / PI))
}

/// `‖[2π·P(σ,A) − (2 − ρ)I] − ρ·(σ̄I − A*)^{-1}·D(σ)·(σI − A)^{-1}‖` where
/// `D(σ)` is the boundary defect.
pub fn boundary_identity_residual(a: &Matrix, rho: Rho, sigma: Complex64) -> Result<f64> {
    check_unit(sigma)?;
    require_spectrum_in_disk(a)?;
    let r = resolvent(a, sigma)?;
    let kernel = r.scale(sigma).re_part().scale_real(1.0 / PI);
    let lhs = kernel.scale_real(2.0 * PI).shift(Complex64::new(rho.value() - 2.0, 0.0));
    let defect = boundary_defect(a, rho, sigma)?;
    let rhs = (&(&r.adjoint() * &defect) * &r).scale_real(rho.value());
    Ok(linalg::norm_diff(&lhs, &rhs))
}

/// `S_ρ(z) = (I − (1/ρ + (1 − 1/ρ)z̄)·A)^{-1}`.
pub fn disk_resolvent(a: &Matrix, rho: Rho, z: Complex64) -> Result<Matrix> {
    let r = rho.value();
    let coeff = Complex64::new(1.0 / r, 0.0) + z.conj() * (1.0 - 1.0 / r);
    inverse(&(-&a.scale(coeff)).shift(Complex64::new(1.0, 0.0)))
}

/// `‖S*·D(z)·S − Re(I + (2/ρ)·A·S)‖` with `S = S_ρ(z)` and `D(z)` the disk
/// defect.
pub fn cayley_identity_residual(a: &Matrix, rho: Rho, z: Complex64) -> Result<f64> {
    let defect = disk_defect(a, rho, z)?;
    let s = disk_resolvent(a, rho, z)?;
    let lhs = &(&s.adjoint() * &defect) * &s;
    let rhs = (a * &s).scale_real(2.0 / rho.value()).shift(Complex64::new(1.0, 0.0)).re_part();
    Ok(linalg::norm_diff(&lhs, &rhs))
}

/// Scans the boundary defect on `grid_size` nodes, then doubles the grid
/// while the minimum keeps moving by [`REFINE_TOL`] or more (up to
/// `max(grid_size, GRID_CAP)`).
pub fn is_rho_contraction_boundary(a: &Matrix, rho: Rho, grid_size: usize, tol: f64) -> Result<PositivityCertificate> {
    boundary_certificate_impl(a, rho, grid_size, tol, true)
}

/// Boundary scan on exactly `grid_size` nodes, without refinement.
pub fn boundary_certificate_on_grid(a: &Matrix, rho: Rho, grid_size: usize, tol: f64) -> Result<PositivityCertificate> {
    boundary_certificate_impl(a, rho, grid_size, tol, false)
}

fn boundary_certificate_impl(
    a: &Matrix,
    rho: Rho,
    grid_size: usize,
    tol: f64,
    refine: bool,
) -> Result<PositivityCertificate> {
    if grid_size < 16 {
        return Err(Error::invalid(format!("boundary grid needs at least 16 points, got {grid_size}")));
    }
    if !(tol >= 0.0) {
        return Err(Error::invalid("tolerance must be non-negative"));
    }
    let parts = DefectParts::new(a, rho);
    let mut tracker = MinTracker::new(a.dim());
    let mut size = grid_size;
    boundary_min(&parts, 1.0, size, coarse_to_fine(size), &mut tracker);
    if refine {
        let cap = grid_size.max(GRID_CAP);
        while size * 2 <= cap {
            let before = tracker.min;
            size *= 2;
            boundary_min(&parts, 1.0, size, (1..size).step_by(2), &mut tracker);
            if (before - tracker.min).abs() < REFINE_TOL {
                break;
            }
        }
    }
    let (k, s) = tracker.arg.expect("non-empty grid");
    Ok(PositivityCertificate::new(
        size,
        None,
        Complex64::from_polar(1.0, node_angle(k, s)),
        tracker.min,
        tol,
    ))
}

/// Scans the disk defect over the polar grid
/// `z = (j/radial_steps)·e^{2πik/angular_steps}`, `j = 0..=radial_steps`; the
/// ring `j = radial_steps` is the unit circle.
pub fn is_rho_contraction_disk(
    a: &Matrix,
    rho: Rho,
    radial_steps: usize,
    angular_steps: usize,
    tol: f64,
) -> Result<PositivityCertificate> {
    if radial_steps < 4 || angular_steps < 16 {
        return Err(Error::invalid(format!(
            "disk grid needs radial_steps >= 4 and angular_steps >= 16, got {radial_steps} x {angular_steps}"
        )));
    }
    let parts = DefectParts::new(a, rho);
    let n = a.dim();
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    let mut tracker: MinTracker<(usize, usize)> = MinTracker::new(n);
    let order = coarse_to_fine(angular_steps);
    // boundary ring first: the minimum is expected there
    for j in (1..=radial_steps).rev() {
        let r = j as f64 / radial_steps as f64;
        for &k in &order {
            let (sin, cos) = node_angle(k, angular_steps).sin_cos();
            parts.fill(r, cos, sin, 1.0, &mut buf);
            tracker.offer(n, &buf, (j, k));
        }
    }
    parts.fill(0.0, 1.0, 0.0, 1.0, &mut buf);
    tracker.offer(n, &buf, (0, 0));

    let (j, k) = tracker.arg.expect("non-empty grid");
    let worst = Complex64::from_polar(j as f64 / radial_steps as f64, node_angle(k, angular_steps));
    Ok(PositivityCertificate::new(
        angular_steps,
        Some(radial_steps),
        worst,
        tracker.min,
        tol,
    ))
}
