//! Dense complex polynomials as ascending coefficient slices.

use num_complex::Complex64;

use crate::linalg::{eigenvalues, Matrix};
use crate::Result;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// Horner evaluation at a matrix argument.
pub(crate) fn eval_matrix(coeffs: &[Complex64], a: &Matrix) -> Matrix {
    let n = a.dim();
    let mut acc = Matrix::zeros(n);
    for &c in coeffs.iter().rev() {
        acc = (&acc * a).shift(c);
    }
    acc
}

pub(crate) fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return vec![ZERO];
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub(crate) fn add_scaled(acc: &mut Vec<Complex64>, p: &[Complex64], scale: Complex64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), ZERO);
    }
    for (a, &c) in acc.iter_mut().zip(p) {
        *a += c * scale;
    }
}

/// Drops exactly-zero leading coefficients, keeping at least one entry.
pub(crate) fn trim(mut p: Vec<Complex64>) -> Vec<Complex64> {
    while p.len() > 1 && *p.last().unwrap() == ZERO {
        p.pop();
    }
    if p.is_empty() {
        p.push(ZERO);
    }
    p
}

pub(crate) fn degree(p: &[Complex64]) -> usize {
    p.len().saturating_sub(1)
}

/// Roots via eigenvalues of the companion matrix of the monic rescaling.
pub(crate) fn roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = degree(p);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = p[d];
    let mut companion = Matrix::zeros(d);
    for j in 0..d {
        companion[(0, j)] = -p[d - 1 - j] / lead;
    }
    for i in 1..d {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    eigenvalues(&companion)
}
