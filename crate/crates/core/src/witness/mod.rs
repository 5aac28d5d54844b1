//! The sharpness witness for `‖f(A)‖ ≤ k_ρ(|f(0)|)` and seeded random test
//! instances.
//!
//! Equality is attained by the pair `A = [[0, ρ], [0, 0]]`,
//! `f = g_s(z) = (s + z)/(1 + sz)`: since `A² = 0`,
//! `f(A) = [[f(0), ρf'(0)], [0, f(0)]]`, whose norm has a closed form.

pub mod rng;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::k_rho;
use crate::contraction::{rho_radius, Rho, DEFAULT_GRID, DEFAULT_RADIUS_TOL};
use crate::funcalc::{eval_matrix, poly, mobius, BlaschkeSpec, RationalFunction};
use crate::linalg::{op_norm, Matrix};
use crate::{Error, Result};

pub use rng::{derive_seed, SeededRng};

/// Dilation constants plotted in the `k_ρ` figure.
pub const FIGURE_RHOS: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];
/// Number of equispaced `s` points in `[0, 1]`, endpoints included.
pub const FIGURE_POINTS: usize = 101;
/// Random Blaschke zeros are drawn from the disk of this radius.
pub const BLASCHKE_ZERO_RADIUS: f64 = 0.95;
/// Sharpness records pass when `gap` is at most this.
pub const SHARPNESS_TOL: f64 = 1e-9;

/// `[[0, ρ], [0, 0]]`, a ρ-contraction with `w_ρ = 1` and norm `ρ`.
pub fn shift_matrix(rho: Rho) -> Matrix {
    Matrix::from_real_rows(&[&[0.0, rho.value()], &[0.0, 0.0]]).expect("2x2 rows")
}

/// `‖[[f(0), ρf'(0)], [0, f(0)]]‖ = (ρ/2)|f'(0)| + sqrt((ρ²/4)|f'(0)|² + |f(0)|²)`.
pub fn jordan_calculus_norm(f0: Complex64, fprime0: Complex64, rho: Rho) -> f64 {
    let half = rho.value() * fprime0.norm() / 2.0;
    half + (half * half + f0.norm_sqr()).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRecord {
    pub rho: f64,
    pub s: f64,
    /// `‖g_s(A)‖` computed from the matrix.
    pub lhs: f64,
    /// `k_ρ(s)`
    pub rhs: f64,
    pub gap: f64,
}

impl SharpnessRecord {
    pub fn pass(&self) -> bool {
        self.gap <= SHARPNESS_TOL
    }
}

/// Compares `‖g_s(A)‖` with `k_ρ(s)` for the shift matrix; `s = 1` uses the
/// constant function 1.
pub fn sharpness_record(rho: Rho, s: f64) -> Result<SharpnessRecord> {
    let rhs = k_rho(rho, s)?;
    let f = if s < 1.0 {
        mobius(Complex64::new(s, 0.0))?
    } else {
        RationalFunction::constant(Complex64::new(1.0, 0.0))
    };
    let lhs = op_norm(&eval_matrix(&f, &shift_matrix(rho))?);
    Ok(SharpnessRecord {
        rho: rho.value(),
        s,
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

pub fn sharpness_scan(rho: Rho, s_grid: &[f64]) -> Result<Vec<SharpnessRecord>> {
    s_grid.iter().map(|&s| sharpness_record(rho, s)).collect()
}

/// `points` equispaced values from 0 to 1 inclusive.
pub fn unit_grid(points: usize) -> Vec<f64> {
    let last = (points.max(2) - 1) as f64;
    (0..points.max(2)).map(|i| i as f64 / last).collect()
}

/// One point of a `k_ρ` curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub rho: f64,
    pub s: f64,
    pub k: f64,
}

/// `k_ρ` sampled on [`FIGURE_POINTS`] equispaced points.
pub fn k_curve(rho: Rho) -> Vec<CurvePoint> {
    unit_grid(FIGURE_POINTS)
        .into_iter()
        .map(|s| CurvePoint {
            rho: rho.value(),
            s,
            k: k_rho(rho, s).expect("grid lies in [0, 1]"),
        })
        .collect()
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix(dim: usize, rng: &mut SeededRng) -> Matrix {
    Matrix::from_vec(dim, (0..dim * dim).map(|_| rng.complex_normal()).collect()).expect("dim >= 1")
}

/// `G/w_ρ(G)` for a Gaussian `G` drawn from `seed`, so the result has
/// `w_ρ = 1` up to the radius tolerance. The upper end of the radius bracket
/// is used, which keeps the result a ρ-contraction on the scan grid. A zero
/// draw is retried with `seed + 1`.
pub fn random_contraction(rho: Rho, dim: usize, seed: u64) -> Result<Matrix> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let mut seed = seed;
    loop {
        let g = gaussian_matrix(dim, &mut SeededRng::new(seed));
        if !g.is_zero() {
            let w = rho_radius(&g, rho, DEFAULT_RADIUS_TOL, DEFAULT_GRID)?.hi();
            return Ok(g.scale_real(1.0 / w));
        }
        seed = seed.wrapping_add(1);
    }
}

/// Zeros uniform in the disk of radius [`BLASCHKE_ZERO_RADIUS`] (the first
/// one placed at the origin when `force_zero_at_origin`), and a uniform
/// unimodular factor.
pub fn random_blaschke_spec(degree: usize, seed: u64, force_zero_at_origin: bool) -> Result<BlaschkeSpec> {
    if degree == 0 {
        return Err(Error::invalid("Blaschke degree must be at least 1"));
    }
    let mut rng = SeededRng::new(seed);
    let zeros = (0..degree)
        .map(|i| {
            if i == 0 && force_zero_at_origin {
                Complex64::new(0.0, 0.0)
            } else {
                rng.in_disk(BLASCHKE_ZERO_RADIUS)
            }
        })
        .collect();
    BlaschkeSpec::new(zeros, rng.unit_phase())
}

pub fn random_blaschke(degree: usize, seed: u64, force_zero_at_origin: bool) -> Result<RationalFunction> {
    random_blaschke_spec(degree, seed, force_zero_at_origin)?.to_rational()
}

/// Rational function of numerator degree `≤ max_degree` and denominator
/// degree `≤ 2` whose poles have modulus in `[1.2, 3]`.
pub fn random_rational(max_degree: usize, seed: u64) -> Result<RationalFunction> {
    let mut rng = SeededRng::new(seed);
    let deg = rng.int_range(0, max_degree);
    let num: Vec<Complex64> = (0..=deg).map(|_| rng.complex_normal()).collect();
    let mut den = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..rng.int_range(0, 2) {
        let pole = Complex64::from_polar(rng.uniform_range(1.2, 3.0), TAU * rng.uniform());
        den = poly::mul(&den, &[-pole, Complex64::new(1.0, 0.0)]);
    }
    RationalFunction::new(num, den)
}
