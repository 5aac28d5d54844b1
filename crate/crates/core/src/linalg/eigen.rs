//! Eigenvalue kernels: cyclic complex Jacobi for Hermitian matrices and a
//! balanced Hessenberg + single-shift QR iteration for general matrices.

use num_complex::Complex64;

use super::Matrix;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MAX_SWEEPS: usize = 64;

/// Relative hermiticity tolerance, applied against the Frobenius norm.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigenReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: Matrix,
    /// `max_k ‖H v_k − λ_k v_k‖` over the computed pairs.
    pub residual: f64,
}

/// Checks `|H_ij − conj(H_ji)| ≤ tol·‖H‖_F` and returns the symmetrized
/// entries `(H + H*)/2`.
pub(crate) fn symmetrized(h: &Matrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let scale = h.frobenius_norm();
    let limit = HERMITICITY_TOL * scale;
    let mut out = h.as_slice().to_vec();
    for i in 0..n {
        for j in i..n {
            let a = h[(i, j)];
            let b = h[(j, i)].conj();
            let deviation = (a - b).norm();
            if deviation > limit {
                return Err(Error::NotHermitian {
                    row: i,
                    col: j,
                    deviation,
                });
            }
            let avg = (a + b) * 0.5;
            out[i * n + j] = avg;
            out[j * n + i] = avg.conj();
        }
        out[i * n + i].im = 0.0;
    }
    Ok(out)
}

/// In-place cyclic Jacobi on a Hermitian row-major buffer. On return the
/// diagonal holds the eigenvalues; when `vectors` is given it accumulates the
/// unitary `V` with `A_in = V·diag·V*`.
pub(crate) fn jacobi_in_place(a: &mut [Complex64], n: usize, mut vectors: Option<&mut [Complex64]>) {
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return;
    }
    let floor = (f64::EPSILON * 1e-2).powi(2) * total;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off <= floor {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let phase = apq / mag;
                let phase_conj = phase.conj();

                // columns: A ← A·J
                for k in 0..n {
                    let hp = a[k * n + p];
                    let hq = a[k * n + q];
                    a[k * n + p] = hp * c - phase_conj * hq * s;
                    a[k * n + q] = hp * s + phase_conj * hq * c;
                }
                // rows: A ← J*·A
                for k in 0..n {
                    let hp = a[p * n + k];
                    let hq = a[q * n + k];
                    a[p * n + k] = hp * c - phase * hq * s;
                    a[q * n + k] = hp * s + phase * hq * c;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);

                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vp = v[k * n + p];
                        let vq = v[k * n + q];
                        v[k * n + p] = vp * c - phase_conj * vq * s;
                        v[k * n + q] = vp * s + phase_conj * vq * c;
                    }
                }
            }
        }
    }
}

/// Ascending eigenvalues of an already-Hermitian buffer (consumed).
pub(crate) fn hermitian_eigenvalues_raw(mut a: Vec<Complex64>, n: usize) -> Vec<f64> {
    jacobi_in_place(&mut a, n, None);
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Full Hermitian eigen-decomposition after the hermiticity check.
pub fn hermitian_eigen(h: &Matrix) -> Result<HermitianEigenReport> {
    let n = h.dim();
    let sym = symmetrized(h)?;
    let mut work = sym.clone();
    let mut v = Matrix::identity(n).into_vec();
    jacobi_in_place(&mut work, n, Some(&mut v));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[i * n + i].re.total_cmp(&work[j * n + j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| work[i * n + i].re).collect();
    let mut vecs = vec![ZERO; n * n];
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vecs[row * n + col] = v[row * n + src];
        }
    }

    let sym = Matrix::from_vec(n, sym)?;
    let mut residual: f64 = 0.0;
    for (col, &lambda) in eigenvalues.iter().enumerate() {
        let x: Vec<Complex64> = (0..n).map(|row| vecs[row * n + col]).collect();
        let hx = sym.mul_vec(&x);
        let r = hx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        residual = residual.max(r);
    }
    Ok(HermitianEigenReport {
        eigenvalues,
        eigenvectors: Matrix::from_vec(n, vecs)?,
        residual,
    })
}

/// Cholesky attempt on `H + shift·I` (lower triangle of a Hermitian buffer).
/// Succeeds iff the shifted matrix is numerically positive definite, i.e.
/// `λ_min(H) > −shift`. The buffer is overwritten.
pub(crate) fn cholesky_succeeds(a: &mut [Complex64], n: usize, shift: f64) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j].re + shift;
        for k in 0..j {
            d -= a[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let ljj = d.sqrt();
        a[j * n + j] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k].conj();
            }
            a[i * n + j] = s / ljj;
        }
    }
    true
}

/// All eigenvalues of a general complex matrix, unordered.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>> {
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    balance(&mut a, n);
    hessenberg(&mut a, n);
    hessenberg_qr(&mut a, n)
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Parlett–Reinsch diagonal similarity scaling by powers of two.
fn balance(a: &mut [Complex64], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += l1(a[j * n + i]);
                    r += l1(a[i * n + j]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[i * n + j] *= g;
                }
                for j in 0..n {
                    a[j * n + i] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Householder reduction to upper Hessenberg form (similarity, in place).
fn hessenberg(a: &mut [Complex64], n: usize) {
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = ((k + 1)..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        v.iter_mut().for_each(|z| *z = ZERO);
        for i in (k + 1)..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);

        // A ← (I − 2vv*)·A
        for j in 0..n {
            let mut dot = ZERO;
            for i in (k + 1)..n {
                dot += v[i].conj() * a[i * n + j];
            }
            for i in (k + 1)..n {
                a[i * n + j] -= v[i] * dot * 2.0;
            }
        }
        // A ← A·(I − 2vv*)
        for i in 0..n {
            let mut dot = ZERO;
            for j in (k + 1)..n {
                dot += a[i * n + j] * v[j];
            }
            for j in (k + 1)..n {
                a[i * n + j] -= dot * v[j].conj() * 2.0;
            }
        }
        for i in (k + 2)..n {
            a[i * n + k] = ZERO;
        }
    }
}

/// Unitary Givens `G = [[c, s], [−s̄, c]]` with `G·[x; y] = [r; 0]`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(h: &mut [Complex64], n: usize) -> Result<Vec<Complex64>> {
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut eig = vec![ZERO; n];
    if scale == 0.0 {
        return Ok(eig);
    }
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let max_iter = 60 * n;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut rot: Vec<(f64, Complex64)> = vec![(1.0, ZERO); n];
    loop {
        // find the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo * n + lo - 1].norm();
            let diag = h[lo * n + lo].norm() + h[(lo - 1) * n + lo - 1].norm();
            let reference = if diag == 0.0 { scale } else { diag };
            if sub <= f64::EPSILON * reference || sub < tiny {
                h[lo * n + lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi * n + hi];
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(Error::NoConvergence {
                what: "Hessenberg QR",
                iterations: iter,
                detail: format!("active block [{lo}, {hi}] failed to deflate"),
            });
        }
        let mu = if iter % 11 == 0 {
            // exceptional shift
            h[hi * n + hi] + Complex64::new(h[hi * n + hi - 1].norm() * 0.75, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1) * n + hi - 1],
                h[(hi - 1) * n + hi],
                h[hi * n + hi - 1],
                h[hi * n + hi],
            )
        };
        for k in lo..=hi {
            h[k * n + k] -= mu;
        }
        for k in lo..hi {
            let (c, s) = givens(h[k * n + k], h[(k + 1) * n + k]);
            rot[k] = (c, s);
            for j in k..=hi {
                let x = h[k * n + j];
                let y = h[(k + 1) * n + j];
                h[k * n + j] = x * c + s * y;
                h[(k + 1) * n + j] = -s.conj() * x + y * c;
            }
        }
        for k in lo..hi {
            let (c, s) = rot[k];
            let last = (k + 2).min(hi);
            for i in lo..=last {
                let x = h[i * n + k];
                let y = h[i * n + k + 1];
                h[i * n + k] = x * c + y * s.conj();
                h[i * n + k + 1] = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            h[k * n + k] += mu;
        }
    }
    Ok(eig)
}
