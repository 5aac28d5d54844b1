//! Grid scans of the positivity defects.
//!
//! Scans visit points coarse-to-fine and only run a full eigensolve when a
//! shifted Cholesky factorization shows the point can lower the running
//! minimum, so a grid of `N` points costs about `N` small factorizations.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::Rho;
use crate::linalg::{cholesky_succeeds, hermitian_eigenvalues_raw, Matrix};

/// The pieces of both defects for a fixed `A` and `ρ`:
///
/// `Re(z̄A) = r·(cos θ·H1 + sin θ·H2)` for `z = r·e^{iθ}`, with `H1 = Re(A)`,
/// `H2 = Re(−iA)`, and `G = A*A`.
pub(crate) struct DefectParts {
    pub n: usize,
    h1: Vec<Complex64>,
    h2: Vec<Complex64>,
    gram: Vec<Complex64>,
    /// `2(1 − 1/ρ)`
    c1: f64,
    inv_rho: f64,
}

impl DefectParts {
    pub fn new(a: &Matrix, rho: Rho) -> Self {
        let minus_i = Complex64::new(0.0, -1.0);
        DefectParts {
            n: a.dim(),
            h1: a.re_part().into_vec(),
            h2: a.scale(minus_i).re_part().into_vec(),
            gram: a.gram().re_part().into_vec(),
            c1: 2.0 * (1.0 - 1.0 / rho.value()),
            inv_rho: 1.0 / rho.value(),
        }
    }

    /// Writes the defect of `A/a` at `z = r·e^{iθ}` into `out`:
    ///
    /// `I − 2(1 − 1/ρ)·Re(z̄A)/a − (1/ρ² − (1 − 1/ρ)²·r²)·A*A/a²`.
    ///
    /// At `r = 1` the `A*A` coefficient equals `2/ρ − 1`, the boundary form.
    pub fn fill(&self, r: f64, cos: f64, sin: f64, inv_scale: f64, out: &mut [Complex64]) {
        let lin = self.c1 * r * inv_scale;
        let q = 1.0 - self.inv_rho;
        let quad = (self.inv_rho * self.inv_rho - q * q * r * r) * inv_scale * inv_scale;
        let (lc, ls) = (lin * cos, lin * sin);
        for (k, o) in out.iter_mut().enumerate() {
            *o = -(self.h1[k] * lc + self.h2[k] * ls + self.gram[k] * quad);
        }
        for i in 0..self.n {
            out[i * self.n + i] += 1.0;
            out[i * self.n + i].im = 0.0;
        }
    }
}

/// Angle of node `k` on the `size`-point circle grid.
pub(crate) fn node_angle(k: usize, size: usize) -> f64 {
    TAU * k as f64 / size as f64
}

/// Grid indices `0..size`, coarse strides first.
pub(crate) fn coarse_to_fine(size: usize) -> Vec<usize> {
    let mut stride = 1;
    while size % (stride * 2) == 0 && size / (stride * 2) >= 8 {
        stride *= 2;
    }
    let mut order: Vec<usize> = (0..size).step_by(stride).collect();
    while stride > 1 {
        let half = stride / 2;
        order.extend((half..size).step_by(stride));
        stride = half;
    }
    order
}

/// Running minimum of `λ_min` over a sequence of Hermitian matrices.
pub(crate) struct MinTracker<P> {
    pub min: f64,
    pub arg: Option<P>,
    chol: Vec<Complex64>,
}

impl<P: Copy> MinTracker<P> {
    pub fn new(n: usize) -> Self {
        MinTracker {
            min: f64::INFINITY,
            arg: None,
            chol: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn offer(&mut self, n: usize, defect: &[Complex64], point: P) {
        if self.min.is_finite() {
            self.chol.copy_from_slice(defect);
            // λ_min > current minimum: cannot improve it
            if cholesky_succeeds(&mut self.chol, n, -self.min) {
                return;
            }
        }
        let value = hermitian_eigenvalues_raw(defect.to_vec(), n)[0];
        if value < self.min || self.arg.is_none() {
            self.min = value;
            self.arg = Some(point);
        }
    }
}

/// Minimum of `λ_min(boundary defect)` over the nodes `indices` of a
/// `size`-point grid, for the matrix `A·inv_scale`.
pub(crate) fn boundary_min(
    parts: &DefectParts,
    inv_scale: f64,
    size: usize,
    indices: impl IntoIterator<Item = usize>,
    tracker: &mut MinTracker<(usize, usize)>,
) {
    let n = parts.n;
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    for k in indices {
        let (sin, cos) = node_angle(k, size).sin_cos();
        parts.fill(1.0, cos, sin, inv_scale, &mut buf);
        tracker.offer(n, &buf, (k, size));
    }
}
