use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly;
use super::rational::RationalFunction;
use crate::contraction::{poisson_kernel, poisson_kernel_unchecked, Rho};
use crate::linalg::{self, op_norm, spectral_radius, Lu, Matrix};
use crate::{Error, Result};

/// Largest grid reached by adaptive doubling.
pub const QUADRATURE_CAP: usize = 1 << 16;
/// Doubling stops once successive estimates differ by less than this.
pub const QUADRATURE_TOL: f64 = 1e-10;

const SINGULAR_Q_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-9;

/// Equispaced nodes `σ_k = e^{2πik/size}` on the unit circle, each carrying
/// arc length `2π/size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct BoundaryGrid {
    size: usize,
}

impl BoundaryGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 16 || !size.is_power_of_two() {
            return Err(Error::invalid(format!(
                "boundary grid size must be a power of two >= 16, got {size}"
            )));
        }
        Ok(BoundaryGrid { size })
    }

    pub fn size(self) -> usize {
        self.size
    }

    pub fn node(self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * k as f64 / self.size as f64)
    }

    pub fn nodes(self) -> impl Iterator<Item = Complex64> {
        (0..self.size).map(move |k| self.node(k))
    }

    /// Arc length carried by each node.
    pub fn weight(self) -> f64 {
        TAU / self.size as f64
    }

    pub fn doubled(self) -> Self {
        BoundaryGrid { size: self.size * 2 }
    }
}

impl Default for BoundaryGrid {
    fn default() -> Self {
        BoundaryGrid { size: 1024 }
    }
}

impl TryFrom<usize> for BoundaryGrid {
    type Error = Error;
    fn try_from(size: usize) -> Result<Self> {
        BoundaryGrid::new(size)
    }
}

impl From<BoundaryGrid> for usize {
    fn from(g: BoundaryGrid) -> usize {
        g.size
    }
}

/// `max |f(σ)|` over the unit circle.
///
/// The grid maximum is polished by a golden-section search on the two
/// adjacent cells, and the grid is doubled until the estimate moves by less
/// than [`QUADRATURE_TOL`] or reaches [`QUADRATURE_CAP`]. By the maximum
/// modulus principle this is also the supremum over the closed disk.
pub fn sup_norm(f: &RationalFunction, grid: BoundaryGrid) -> f64 {
    let modulus = |theta: f64| {
        let z = Complex64::from_polar(1.0, theta);
        (poly::eval(f.numerator(), z) / poly::eval(f.denominator(), z)).norm()
    };
    let mut size = grid.size();
    let mut best: Option<f64> = None;
    loop {
        let h = TAU / size as f64;
        let (k, grid_max) = (0..size)
            .map(|k| (k, modulus(h * k as f64)))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        let centre = h * k as f64;
        let polished = golden_max(&modulus, centre - h, centre + h).max(grid_max);
        if let Some(prev) = best {
            if (polished - prev).abs() < QUADRATURE_TOL || size >= QUADRATURE_CAP {
                return polished.max(prev);
            }
        }
        best = Some(polished);
        if size >= QUADRATURE_CAP {
            return polished;
        }
        size *= 2;
    }
}

fn golden_max(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..80 {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + ratio * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - ratio * (hi - lo);
            g1 = g(x1);
        }
    }
    g1.max(g2)
}

/// `f(A) = p(A)·q(A)^{-1}`.
///
/// Fails with a singularity error when the smallest singular value of `q(A)`
/// is below `1e-12·max(1, ‖q(A)‖)`, or when the computed result does not
/// satisfy `‖q(A)·f(A) − p(A)‖ ≤ 1e-9·max(1, ‖p(A)‖)`.
pub fn eval_matrix(f: &RationalFunction, a: &Matrix) -> Result<Matrix> {
    if !a.is_finite() {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let p = poly::eval_matrix(f.numerator(), a);
    if f.denominator().len() == 1 {
        return Ok(p.scale(f.denominator()[0].inv()));
    }
    let q = poly::eval_matrix(f.denominator(), a);
    let q_norm = op_norm(&q);
    let q_inv = Lu::factor(&q)
        .map(|lu| lu.inverse())
        .filter(Matrix::is_finite)
        .ok_or(Error::Singular {
            at: Complex64::new(0.0, 0.0),
            sigma_min: 0.0,
        })?;
    let sigma_min = 1.0 / op_norm(&q_inv);
    if !(sigma_min > SINGULAR_Q_TOL * q_norm.max(1.0)) {
        return Err(Error::Singular {
            at: Complex64::new(0.0, 0.0),
            sigma_min,
        });
    }
    let out = &p * &q_inv;
    let residual = linalg::norm_diff(&(&q * &out), &p);
    if !(residual <= RESIDUAL_TOL * op_norm(&p).max(1.0)) {
        return Err(Error::Singular {
            at: Complex64::new(0.0, 0.0),
            sigma_min,
        });
    }
    Ok(out)
}

fn require_spectrum_in_disk(a: &Matrix) -> Result<()> {
    let r = spectral_radius(a)?;
    if r < 1.0 {
        Ok(())
    } else {
        Err(Error::SpectrumNotInDisk { spectral_radius: r })
    }
}

/// Mean of `g` over the circle by the trapezoidal rule, doubling the grid
/// (reusing earlier nodes) until two successive means differ by less than
/// `QUADRATURE_TOL·max(1, ‖mean‖)`. Returns the mean and the final grid size.
fn adaptive_circle_mean(
    grid: BoundaryGrid,
    dim: usize,
    what: &'static str,
    mut g: impl FnMut(Complex64) -> Result<Matrix>,
) -> Result<(Matrix, usize)> {
    let mut size = grid.size();
    let mut sum = Matrix::zeros(dim);
    for k in 0..size {
        sum = sum + g(Complex64::from_polar(1.0, TAU * k as f64 / size as f64))?;
    }
    let mut mean = sum.scale_real(1.0 / size as f64);
    while size < QUADRATURE_CAP {
        let fine = size * 2;
        let mut odd = Matrix::zeros(dim);
        for k in (1..fine).step_by(2) {
            odd = odd + g(Complex64::from_polar(1.0, TAU * k as f64 / fine as f64))?;
        }
        let next = (&mean + &odd.scale_real(1.0 / size as f64)).scale_real(0.5);
        let change = linalg::norm_diff(&next, &mean);
        mean = next;
        size = fine;
        if change < QUADRATURE_TOL * op_norm(&mean).max(1.0) {
            return Ok((mean, size));
        }
    }
    Err(Error::NoConvergence {
        what,
        iterations: size,
        detail: format!("trapezoidal rule did not settle below {QUADRATURE_TOL:e} by {QUADRATURE_CAP} nodes"),
    })
}

/// `γ_A(f) = ∫ f(σ)(σI − A)^{-1} dσ/(2πi)`, by the trapezoidal rule
/// `(1/N)·Σ_k f(σ_k)·σ_k·(σ_kI − A)^{-1}` with adaptive doubling from
/// `grid`. Agrees with [`eval_matrix`] for spectra inside the disk.
pub fn cauchy_calculus(f: &RationalFunction, a: &Matrix, grid: BoundaryGrid) -> Result<Matrix> {
    require_spectrum_in_disk(a)?;
    cauchy_mean(f, a, grid).map(|(m, _)| m)
}

fn cauchy_mean(f: &RationalFunction, a: &Matrix, grid: BoundaryGrid) -> Result<(Matrix, usize)> {
    adaptive_circle_mean(grid, a.dim(), "cauchy_calculus", |sigma| {
        let r = linalg::resolvent_unguarded(a, sigma)?;
        Ok(r.scale(f.eval(sigma)? * sigma))
    })
}

/// `‖[γ_A(f) + f(0)·I] − ∫ f(σ)·P(σ, A)|dσ|‖`, both sides by adaptive
/// trapezoidal quadrature, where `P(σ, A) = (1/π)·Re(σ(σI − A)^{-1})`.
pub fn poisson_identity_residual(f: &RationalFunction, a: &Matrix, grid: BoundaryGrid) -> Result<f64> {
    require_spectrum_in_disk(a)?;
    let (cauchy, size) = cauchy_mean(f, a, grid)?;
    let lhs = cauchy.shift(f.value_at_zero());
    let start = BoundaryGrid::new(size).unwrap_or(grid);
    let (poisson_mean, _) = adaptive_circle_mean(start, a.dim(), "poisson_identity_residual", |sigma| {
        Ok(poisson_kernel_unchecked(a, sigma)?.scale(f.eval(sigma)?))
    })?;
    let rhs = poisson_mean.scale_real(TAU);
    Ok(linalg::norm_diff(&lhs, &rhs))
}

/// Residual of the Herglotz-type representation for `f(0) = 0`,
/// `‖f‖_∞ ≤ 1`, `0 < ε < 1` and `|τ| = 1`:
///
/// ```text
/// P(τ, εf(A)) − (2−ρ)/(2π)·I
///     = (1/2π) ∫ Re((τ + εf(σ))/(τ − εf(σ)))·[P(σ, A) − (2−ρ)/(2π)·I] |dσ|.
/// ```
///
/// The left side uses `εf(A)` from [`eval_matrix`]; the right side is the
/// trapezoidal sum on exactly `grid` (no refinement), so the residual shows
/// the quadrature error at that resolution.
pub fn herglotz_residual(
    f: &RationalFunction,
    a: &Matrix,
    rho: Rho,
    tau: Complex64,
    epsilon: f64,
    grid: BoundaryGrid,
) -> Result<f64> {
    let f0 = f.value_at_zero().norm();
    if !(f0 <= 1e-12) {
        return Err(Error::hypothesis("f(0) = 0", f0));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !((tau.norm() - 1.0).abs() <= 1e-12) {
        return Err(Error::invalid(format!("tau = {tau} is not on the unit circle")));
    }
    let sup = sup_norm(f, BoundaryGrid::default());
    if !(sup <= 1.0 + 1e-9) {
        return Err(Error::hypothesis("sup norm of f <= 1", sup));
    }
    require_spectrum_in_disk(a)?;

    let level = (2.0 - rho.value()) / TAU;
    let inner = eval_matrix(f, a)?.scale_real(epsilon);
    let lhs = poisson_kernel(&inner, tau)?.shift(Complex64::new(-level, 0.0));

    let mut sum = Matrix::zeros(a.dim());
    for sigma in grid.nodes() {
        let w = epsilon * f.eval(sigma)?;
        let weight = ((tau + w) / (tau - w)).re;
        let kernel = poisson_kernel_unchecked(a, sigma)?.shift(Complex64::new(-level, 0.0));
        sum = sum + kernel.scale_real(weight);
    }
    let rhs = sum.scale_real(grid.weight() / TAU);
    Ok(linalg::norm_diff(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalc::{mobius, BlaschkeSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nilpotent(x: f64) -> Matrix {
        Matrix::from_real_rows(&[&[0.0, x], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(BoundaryGrid::new(8).is_err());
        assert!(BoundaryGrid::new(48).is_err());
        let g = BoundaryGrid::new(64).unwrap();
        assert_eq!(g.nodes().count(), 64);
        assert!((g.weight() * 64.0 - TAU).abs() < 1e-15);
        assert!((g.node(16) - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn sup_norm_examples() {
        let g = BoundaryGrid::new(16).unwrap();
        assert!((sup_norm(&mobius(c(0.7, 0.0)).unwrap(), g) - 1.0).abs() < 1e-12);
        let half = RationalFunction::polynomial(vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!((sup_norm(&half, g) - 0.5).abs() < 1e-15);
        let bump = RationalFunction::polynomial(vec![c(0.5, 0.0), c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!((sup_norm(&bump, g) - 1.0).abs() < 1e-15);
        // maximum strictly between grid nodes
        let tilted = RationalFunction::polynomial(vec![c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.5)]).unwrap();
        assert!((sup_norm(&tilted, g) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eval_matrix_examples() {
        let a = Matrix::from_rows(&[vec![c(0.1, 0.2), c(0.3, 0.0)], vec![c(-0.4, 0.1), c(0.0, -0.5)]]).unwrap();
        assert_eq!(eval_matrix(&RationalFunction::identity(), &a).unwrap(), a);

        for (rho, s) in [(2.0, 0.5), (1.5, 0.3), (3.0, 0.0)] {
            let got = eval_matrix(&mobius(c(s, 0.0)).unwrap(), &nilpotent(rho)).unwrap();
            let want = Matrix::from_real_rows(&[&[s, rho * (1.0 - s * s)], &[0.0, s]]).unwrap();
            assert!(linalg::norm_diff(&got, &want) < 1e-14);
        }

        let f = RationalFunction::new(vec![c(1.0, 0.0)], vec![c(2.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let got = eval_matrix(&f, &Matrix::identity(1)).unwrap();
        assert!((got[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        // q(A) singular: A has eigenvalue at the pole
        assert!(matches!(
            eval_matrix(&f, &Matrix::scalar(1, c(2.0, 0.0))),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn cauchy_examples() {
        let g = BoundaryGrid::new(64).unwrap();
        let a = Matrix::from_rows(&[vec![c(0.2, 0.1), c(0.5, 0.0)], vec![c(0.0, 0.3), c(-0.4, 0.0)]]).unwrap();
        let one = cauchy_calculus(&RationalFunction::constant(c(1.0, 0.0)), &a, g).unwrap();
        assert!(linalg::norm_diff(&one, &Matrix::identity(2)) < 1e-12);

        let n = nilpotent(0.5);
        let id = cauchy_calculus(&RationalFunction::identity(), &n, g).unwrap();
        assert!(linalg::norm_diff(&id, &n) < 1e-12);

        let f = mobius(c(0.5, 0.0)).unwrap();
        let quad = cauchy_calculus(&f, &n, g).unwrap();
        assert!(linalg::norm_diff(&quad, &eval_matrix(&f, &n).unwrap()) < 1e-9);

        assert!(matches!(
            cauchy_calculus(&f, &Matrix::scalar(2, c(1.0, 0.0)), g),
            Err(Error::SpectrumNotInDisk { .. })
        ));
    }

    #[test]
    fn poisson_identity_examples() {
        let g = BoundaryGrid::new(64).unwrap();
        let r = poisson_identity_residual(&RationalFunction::constant(c(1.0, 0.0)), &Matrix::zeros(2), g).unwrap();
        assert!(r < 1e-14);
        let r = poisson_identity_residual(&RationalFunction::identity(), &nilpotent(0.5), g).unwrap();
        assert!(r <= 1e-9);
        let f = BlaschkeSpec::new(vec![c(0.3, -0.2), c(-0.5, 0.1), c(0.0, 0.7)], c(0.0, 1.0))
            .unwrap()
            .to_rational()
            .unwrap();
        let a = Matrix::from_rows(&[
            vec![c(0.1, 0.2), c(0.3, 0.0), c(0.0, -0.2), c(0.1, 0.1)],
            vec![c(-0.2, 0.0), c(0.2, -0.1), c(0.1, 0.0), c(0.0, 0.3)],
            vec![c(0.0, 0.1), c(0.2, 0.2), c(-0.3, 0.0), c(0.1, 0.0)],
            vec![c(0.1, -0.1), c(0.0, 0.0), c(0.2, 0.1), c(0.25, 0.0)],
        ]).unwrap();
        assert!(op_norm(&a) <= 0.8);
        let r = poisson_identity_residual(&f, &a, g).unwrap();
        assert!(r <= 1e-8, "residual {r}");
    }

    #[test]
    fn herglotz_examples() {
        let rho2 = Rho::new(2.0).unwrap();
        let g = BoundaryGrid::new(256).unwrap();
        for tau in [c(1.0, 0.0), c(0.0, 1.0), Complex64::from_polar(1.0, 2.0)] {
            let r = herglotz_residual(&RationalFunction::identity(), &Matrix::zeros(2), rho2, tau, 0.5, g).unwrap();
            assert!(r < 1e-14, "residual {r}");
        }
        let r = herglotz_residual(
            &RationalFunction::monomial(2),
            &nilpotent(0.5),
            Rho::new(1.5).unwrap(),
            c(1.0, 0.0),
            0.9,
            BoundaryGrid::default(),
        )
        .unwrap();
        assert!(r <= 1e-7, "residual {r}");

        let f = BlaschkeSpec::new(vec![c(0.0, 0.0), c(0.4, 0.3)], c(0.6, -0.8))
            .unwrap()
            .to_rational()
            .unwrap();
        let a = Matrix::from_rows(&[vec![c(0.3, 0.1), c(0.6, 0.0)], vec![c(0.0, 0.2), c(-0.5, 0.2)]]).unwrap();
        let r = herglotz_residual(&f, &a, Rho::new(3.0).unwrap(), c(0.0, -1.0), 0.99, BoundaryGrid::new(8192).unwrap())
            .unwrap();
        assert!(r <= 1e-6, "residual {r}");
    }

    #[test]
    fn herglotz_preconditions() {
        let g = BoundaryGrid::default();
        let rho = Rho::new(2.0).unwrap();
        let a = Matrix::zeros(2);
        let shifted = mobius(c(0.3, 0.0)).unwrap();
        assert!(matches!(
            herglotz_residual(&shifted, &a, rho, c(1.0, 0.0), 0.5, g),
            Err(Error::Hypothesis { .. })
        ));
        let id = RationalFunction::identity();
        assert!(herglotz_residual(&id, &a, rho, c(1.0, 0.0), 1.0, g).is_err());
        assert!(herglotz_residual(&id, &a, rho, c(2.0, 0.0), 0.5, g).is_err());
        let big = RationalFunction::monomial(1).scale(c(1.2, 0.0));
        assert!(matches!(
            herglotz_residual(&big, &a, rho, c(1.0, 0.0), 0.5, g),
            Err(Error::Hypothesis { .. })
        ));
    }
}
