//! Dense complex linear algebra for small matrices.

mod eigen;
mod lu;
mod matrix;

pub use eigen::{eigenvalues, hermitian_eigen, HermitianEigenReport, HERMITICITY_TOL};
pub use matrix::Matrix;

pub(crate) use eigen::{cholesky_succeeds, hermitian_eigenvalues_raw, symmetrized};
pub(crate) use lu::Lu;

use num_complex::Complex64;

use crate::{Error, Result};

/// Relative guard on the smallest singular value of a shifted matrix.
pub const SINGULARITY_TOL: f64 = 1e-13;

/// Ascending eigenvalues of a Hermitian matrix (symmetrized first).
pub fn hermitian_eigenvalues(h: &Matrix) -> Result<Vec<f64>> {
    let n = h.dim();
    Ok(hermitian_eigenvalues_raw(symmetrized(h)?, n))
}

/// Smallest eigenvalue of `(H + H*)/2`; rejects inputs whose asymmetry
/// exceeds [`HERMITICITY_TOL`] relative to `‖H‖_F`.
pub fn min_eig_hermitian(h: &Matrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?[0])
}

pub fn max_eig_hermitian(h: &Matrix) -> Result<f64> {
    Ok(*hermitian_eigenvalues(h)?.last().expect("dim >= 1"))
}

/// Spectral norm, computed as `sqrt(λ_max(M*M))`.
pub fn op_norm(m: &Matrix) -> f64 {
    let n = m.dim();
    let g = m.gram();
    // M*M is Hermitian up to rounding; symmetrize directly.
    let mut buf = g.into_vec();
    for i in 0..n {
        buf[i * n + i].im = 0.0;
        for j in (i + 1)..n {
            let avg = (buf[i * n + j] + buf[j * n + i].conj()) * 0.5;
            buf[i * n + j] = avg;
            buf[j * n + i] = avg.conj();
        }
    }
    let top = *hermitian_eigenvalues_raw(buf, n).last().expect("dim >= 1");
    top.max(0.0).sqrt()
}

/// `‖A − B‖`
pub fn norm_diff(a: &Matrix, b: &Matrix) -> f64 {
    op_norm(&(a - b))
}

/// Inverse of a square matrix, or a singularity error when the smallest
/// singular value falls below `SINGULARITY_TOL·max(1, ‖M‖)`.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    guarded_inverse(m, Complex64::new(0.0, 0.0), op_norm(m))
}

fn guarded_inverse(m: &Matrix, at: Complex64, scale: f64) -> Result<Matrix> {
    let inv = Lu::factor(m)
        .map(|lu| lu.inverse())
        .filter(Matrix::is_finite)
        .ok_or(Error::Singular { at, sigma_min: 0.0 })?;
    let sigma_min = 1.0 / op_norm(&inv);
    if !(sigma_min >= SINGULARITY_TOL * scale.max(1.0)) {
        return Err(Error::Singular { at, sigma_min });
    }
    Ok(inv)
}

/// `(λI − A)^{-1}`.
pub fn resolvent(a: &Matrix, lambda: Complex64) -> Result<Matrix> {
    let shifted = (-a).shift(lambda);
    guarded_inverse(&shifted, lambda, op_norm(a))
}

/// Resolvent without the singular-value guard; only exact breakdown is
/// reported. For callers that already know `λ` is away from the spectrum.
pub(crate) fn resolvent_unguarded(a: &Matrix, lambda: Complex64) -> Result<Matrix> {
    let shifted = (-a).shift(lambda);
    Lu::factor(&shifted)
        .map(|lu| lu.inverse())
        .filter(Matrix::is_finite)
        .ok_or(Error::Singular { at: lambda, sigma_min: 0.0 })
}

/// `max |λ|` over the eigenvalues of `A`.
pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
