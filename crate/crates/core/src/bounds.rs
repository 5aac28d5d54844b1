//! The sharp bound function `k_ρ`, the comparison constants around it, and
//! verifiers that test the norm and ρ-radius bounds for `f(A)` on concrete
//! pairs `(A, f)` with `w_ρ(A) ≤ 1` and `‖f‖_∞ ≤ 1`.

use serde::{Deserialize, Serialize};

use crate::contraction::{rho_radius, RadiusResult, Rho, DEFAULT_GRID, DEFAULT_RADIUS_TOL};
use crate::funcalc::{eval_matrix, sup_norm, BoundaryGrid, RationalFunction};
use crate::linalg::{op_norm, Matrix};
use crate::{Error, Result};

/// Accepted excess of `w_ρ(A)` over 1 in verifier hypotheses.
pub const RADIUS_HYPOTHESIS_TOL: f64 = 1e-7;
/// Accepted excess of `‖f‖_∞` over 1 in verifier hypotheses.
pub const SUP_NORM_HYPOTHESIS_TOL: f64 = 1e-9;
/// Relative tolerance of norm-valued contracts.
pub const NORM_CONTRACT_TOL: f64 = 1e-8;
/// Absolute tolerance of radius-valued contracts.
pub const RADIUS_CONTRACT_TOL: f64 = 1e-6;

fn check_unit_interval(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::invalid(format!("s must lie in [0, 1], got {s}")))
    }
}

/// `k_ρ(s) = (ρ/2)(1 − s²) + sqrt((ρ²/4)(1 − s²)² + s²)`, evaluated as
/// `(ρ(1 − s²) + sqrt(ρ²(1 − s²)² + 4s²))/2`. Decreases from `k_ρ(0) = ρ` to
/// `k_ρ(1) = 1`. Rounding is clamped to `[1, ρ]`.
pub fn k_rho(rho: Rho, s: f64) -> Result<f64> {
    check_unit_interval(s)?;
    Ok(k_rho_unchecked(rho.value(), s).clamp(1.0, rho.value()))
}

fn k_rho_unchecked(rho: f64, s: f64) -> f64 {
    let t = rho * (1.0 - s * s);
    (t + (t * t + 4.0 * s * s).sqrt()) / 2.0
}

/// Drury's bound `k(s) = sqrt(2 − 3s² + 2s⁴ + 2(1 − s²)·sqrt(1 − s² + s⁴))`,
/// which coincides with `k_2`.
pub fn k_drury(s: f64) -> Result<f64> {
    check_unit_interval(s)?;
    let s2 = s * s;
    let inner = (1.0 - s2 + s2 * s2).sqrt();
    Ok((2.0 - 3.0 * s2 + 2.0 * s2 * s2 + 2.0 * (1.0 - s2) * inner).sqrt())
}

/// `|k² − ρ(1 − s²)k − s²|` at `k = k_ρ(s)`.
pub fn quadratic_residual(rho: Rho, s: f64) -> Result<f64> {
    let k = k_rho(rho, s)?;
    let r = rho.value();
    Ok((k * k - r * (1.0 - s * s) * k - s * s).abs())
}

fn check_technical_domain(rho: Rho, s: f64) -> Result<()> {
    if !(rho.value() > 1.0) {
        return Err(Error::invalid("technical function requires rho > 1"));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::invalid(format!("technical function requires 0 < s < 1, got {s}")));
    }
    Ok(())
}

/// `F_ρ(s) = −(s − s/(ρ·k_ρ(s)))` for `ρ > 1`, `0 < s < 1`; takes values in
/// `(−(1 − 1/ρ), 0)` and decreases in `s`.
pub fn technical_f(rho: Rho, s: f64) -> Result<f64> {
    check_technical_domain(rho, s)?;
    let k = k_rho_unchecked(rho.value(), s);
    Ok(-(s - s / (rho.value() * k)))
}

/// The same quantity in the form `(s − s·k²)/(k² − s²)` with `k = k_ρ(s)`.
pub fn technical_f_ratio(rho: Rho, s: f64) -> Result<f64> {
    check_technical_domain(rho, s)?;
    let k = k_rho_unchecked(rho.value(), s);
    Ok((s - s * k * k) / (k * k - s * s))
}

/// `ρ_f = 1 + (ρ − 1)(1 + |f(0)|)/(1 − |f(0)|)`: `f(A)` is a
/// `ρ_f`-contraction whenever `A` is a ρ-contraction and `‖f‖_∞ ≤ 1`.
pub fn rho_f_constant(rho: Rho, abs_f0: f64) -> Result<f64> {
    if !(abs_f0 >= 0.0 && abs_f0 < 1.0) {
        return Err(Error::invalid(format!("|f(0)| must lie in [0, 1), got {abs_f0}")));
    }
    Ok(1.0 + (rho.value() - 1.0) * (1.0 + abs_f0) / (1.0 - abs_f0))
}

/// `(ρ² + 1 + (ρ − 1)·sqrt(5ρ² + 2ρ + 1))/(2ρ²)`; equals `5/4` at `ρ = 2`.
pub fn bck_constant(rho: Rho) -> f64 {
    let r = rho.value();
    (r * r + 1.0 + (r - 1.0) * (5.0 * r * r + 2.0 * r + 1.0).sqrt()) / (2.0 * r * r)
}

/// The coarse bound `‖f(A)‖ ≤ ρ`.
pub fn okubo_ando_bound(rho: Rho) -> f64 {
    rho.value()
}

/// Outcome of testing `‖f(A)‖ ≤ k_ρ(|f(0)|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub rho: f64,
    pub abs_f0: f64,
    #[serde(rename = "norm_fA")]
    pub norm_fa: f64,
    pub k_value: f64,
    /// `k_value − norm_fA`
    pub slack: f64,
    pub pass: bool,
}

impl BoundReport {
    pub fn new(rho: Rho, abs_f0: f64, norm_fa: f64) -> Result<Self> {
        let k_value = k_rho(rho, abs_f0.min(1.0))?;
        let slack = k_value - norm_fa;
        Ok(BoundReport {
            rho: rho.value(),
            abs_f0,
            norm_fa,
            k_value,
            slack,
            pass: slack >= -NORM_CONTRACT_TOL * k_value.max(1.0),
        })
    }
}

/// A matrix whose ρ-contraction hypothesis `w_ρ(A) ≤ 1 + 1e-7` has been
/// checked, so several verifiers can share one radius computation.
#[derive(Debug, Clone)]
pub struct CheckedContraction {
    a: Matrix,
    rho: Rho,
    radius: RadiusResult,
}

impl CheckedContraction {
    pub fn new(a: Matrix, rho: Rho) -> Result<Self> {
        let radius = rho_radius(&a, rho, DEFAULT_RADIUS_TOL, DEFAULT_GRID)?;
        if !(radius.value <= 1.0 + RADIUS_HYPOTHESIS_TOL) {
            return Err(Error::hypothesis("rho-radius of A <= 1", radius.value));
        }
        Ok(CheckedContraction { a, rho, radius })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn rho(&self) -> Rho {
        self.rho
    }

    pub fn radius(&self) -> &RadiusResult {
        &self.radius
    }

    /// `‖f(A)‖ ≤ k_ρ(|f(0)|)`.
    pub fn verify_norm_bound(&self, f: &RationalFunction) -> Result<BoundReport> {
        check_sup_norm(f)?;
        let fa = eval_matrix(f, &self.a)?;
        BoundReport::new(self.rho, f.value_at_zero().norm(), op_norm(&fa))
    }

    /// `w_ρ(f(A))` for `f(0) = 0`; expected to be at most 1.
    pub fn verify_zero_preservation(&self, f: &RationalFunction) -> Result<f64> {
        check_sup_norm(f)?;
        let f0 = f.value_at_zero().norm();
        if !(f0 <= 1e-12) {
            return Err(Error::hypothesis("f(0) = 0", f0));
        }
        let fa = eval_matrix(f, &self.a)?;
        Ok(rho_radius(&fa, self.rho, DEFAULT_RADIUS_TOL, DEFAULT_GRID)?.value)
    }

    /// `w_{ρ_f}(f(A))` for non-constant `f`; expected to be at most 1.
    pub fn verify_cassier_suciu(&self, f: &RationalFunction) -> Result<f64> {
        if f.is_constant() {
            return Err(Error::invalid("the rho_f bound applies to non-constant functions only"));
        }
        check_sup_norm(f)?;
        let f0 = f.value_at_zero().norm();
        if !(f0 < 1.0) {
            return Err(Error::hypothesis("|f(0)| < 1", f0));
        }
        let rho_f = Rho::new(rho_f_constant(self.rho, f0)?)?;
        let fa = eval_matrix(f, &self.a)?;
        Ok(rho_radius(&fa, rho_f, DEFAULT_RADIUS_TOL, DEFAULT_GRID)?.value)
    }
}

fn check_sup_norm(f: &RationalFunction) -> Result<()> {
    let sup = sup_norm(f, BoundaryGrid::default());
    if sup <= 1.0 + SUP_NORM_HYPOTHESIS_TOL {
        Ok(())
    } else {
        Err(Error::hypothesis("sup norm of f <= 1", sup))
    }
}

/// Checks `‖f(A)‖ ≤ k_ρ(|f(0)|)` after re-checking `w_ρ(A) ≤ 1` and
/// `‖f‖_∞ ≤ 1`.
pub fn verify_norm_bound(a: &Matrix, rho: Rho, f: &RationalFunction) -> Result<BoundReport> {
    CheckedContraction::new(a.clone(), rho)?.verify_norm_bound(f)
}

/// Returns `w_ρ(f(A))` for `f(0) = 0` after re-checking the hypotheses.
pub fn verify_zero_preservation(a: &Matrix, rho: Rho, f: &RationalFunction) -> Result<f64> {
    CheckedContraction::new(a.clone(), rho)?.verify_zero_preservation(f)
}

/// Returns `w_{ρ_f}(f(A))` for non-constant `f` after re-checking the
/// hypotheses.
pub fn verify_cassier_suciu(a: &Matrix, rho: Rho, f: &RationalFunction) -> Result<f64> {
    CheckedContraction::new(a.clone(), rho)?.verify_cassier_suciu(f)
}
