use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Poles must satisfy `|pole| ≥ 1 + POLE_MARGIN`.
pub const POLE_MARGIN: f64 = 1e-9;
/// Scalar evaluation fails when `|q(z)|` drops below this.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

/// `p(z)/q(z)` with ascending coefficients and every root of `q` outside the
/// closed unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalJson", into = "RationalJson")]
pub struct RationalFunction {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

/// Wire form: `{"num": [{"re":…,"im":…},…], "den": […]}`.
#[derive(Serialize, Deserialize)]
struct RationalJson {
    #[serde(with = "crate::json::complex_vec")]
    num: Vec<Complex64>,
    #[serde(with = "crate::json::complex_vec")]
    den: Vec<Complex64>,
}

impl TryFrom<RationalJson> for RationalFunction {
    type Error = Error;
    fn try_from(j: RationalJson) -> Result<Self> {
        RationalFunction::new(j.num, j.den)
    }
}

impl From<RationalFunction> for RationalJson {
    fn from(f: RationalFunction) -> Self {
        RationalJson { num: f.num, den: f.den }
    }
}

impl RationalFunction {
    /// Validates finiteness and the pole condition.
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        if num.iter().chain(&den).any(|z| !z.is_finite()) {
            return Err(Error::invalid("rational function coefficients must be finite"));
        }
        let num = poly::trim(num);
        let den = poly::trim(den);
        if den.len() == 1 && den[0] == ZERO {
            return Err(Error::invalid("denominator is identically zero"));
        }
        if let Some(modulus) = poly::roots(&den)?
            .iter()
            .map(|r| r.norm())
            .min_by(f64::total_cmp)
        {
            if !(modulus >= 1.0 + POLE_MARGIN) {
                return Err(Error::PoleInDisk { modulus });
            }
        }
        Ok(RationalFunction { num, den })
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        RationalFunction::new(coeffs, vec![ONE])
    }

    pub fn constant(c: Complex64) -> Self {
        RationalFunction {
            num: vec![c],
            den: vec![ONE],
        }
    }

    /// `f(z) = z`
    pub fn identity() -> Self {
        RationalFunction {
            num: vec![ZERO, ONE],
            den: vec![ONE],
        }
    }

    /// `f(z) = z^k`
    pub fn monomial(k: usize) -> Self {
        let mut num = vec![ZERO; k + 1];
        num[k] = ONE;
        RationalFunction { num, den: vec![ONE] }
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.num
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.den
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.num).max(poly::degree(&self.den))
    }

    /// Horner evaluation of `p(z)/q(z)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let q = poly::eval(&self.den, z);
        if q.norm() < DENOMINATOR_FLOOR {
            return Err(Error::Singular {
                at: z,
                sigma_min: q.norm(),
            });
        }
        Ok(poly::eval(&self.num, z) / q)
    }

    /// `f(0) = p_0/q_0`; `q_0 ≠ 0` because no pole lies in the disk.
    pub fn value_at_zero(&self) -> Complex64 {
        self.num[0] / self.den[0]
    }

    /// `f'(0) = (p_1 q_0 − p_0 q_1)/q_0²`.
    pub fn derivative_at_zero(&self) -> Complex64 {
        let coeff = |p: &[Complex64], i: usize| p.get(i).copied().unwrap_or(ZERO);
        let (n0, n1) = (coeff(&self.num, 0), coeff(&self.num, 1));
        let (d0, d1) = (coeff(&self.den, 0), coeff(&self.den, 1));
        (n1 * d0 - n0 * d1) / (d0 * d0)
    }

    /// True when `p` is proportional to `q`, i.e. all `p_i q_j − p_j q_i`
    /// vanish relative to the coefficient scale.
    pub fn is_constant(&self) -> bool {
        let len = self.num.len().max(self.den.len());
        let coeff = |p: &[Complex64], i: usize| p.get(i).copied().unwrap_or(ZERO);
        let scale = self.num.iter().map(|z| z.norm()).fold(0.0, f64::max)
            * self.den.iter().map(|z| z.norm()).fold(0.0, f64::max);
        (0..len).all(|i| {
            (0..len).all(|j| {
                let cross = coeff(&self.num, i) * coeff(&self.den, j) - coeff(&self.num, j) * coeff(&self.den, i);
                cross.norm() <= 1e-12 * scale
            })
        })
    }

    /// `c·f`
    pub fn scale(&self, c: Complex64) -> Self {
        RationalFunction {
            num: poly::trim(self.num.iter().map(|&z| z * c).collect()),
            den: self.den.clone(),
        }
    }

    /// Pointwise product, formed at the coefficient level.
    pub fn mul(&self, other: &RationalFunction) -> Self {
        RationalFunction {
            num: poly::trim(poly::mul(&self.num, &other.num)),
            den: poly::trim(poly::mul(&self.den, &other.den)),
        }
    }

    /// `self ∘ inner`, i.e. `z ↦ self(inner(z))`.
    ///
    /// With `self = p/q`, `inner = a/b` and `m = max(deg p, deg q)`:
    /// `p(a/b)/q(a/b) = Σ p_i a^i b^{m−i} / Σ q_i a^i b^{m−i}`. Both
    /// polynomials are divided by the leading coefficient of the new
    /// denominator, and the result is re-validated.
    pub fn compose(&self, inner: &RationalFunction) -> Result<Self> {
        let m = self.degree();
        let mut a_pow = vec![vec![ONE]];
        let mut b_pow = vec![vec![ONE]];
        for _ in 0..m {
            a_pow.push(poly::mul(a_pow.last().unwrap(), &inner.num));
            b_pow.push(poly::mul(b_pow.last().unwrap(), &inner.den));
        }
        let expand = |coeffs: &[Complex64]| {
            let mut acc = vec![ZERO];
            for (i, &c) in coeffs.iter().enumerate() {
                if c != ZERO {
                    poly::add_scaled(&mut acc, &poly::mul(&a_pow[i], &b_pow[m - i]), c);
                }
            }
            poly::trim(acc)
        };
        let num = expand(&self.num);
        let den = expand(&self.den);
        let lead = *den.last().unwrap();
        if lead == ZERO {
            return Err(Error::invalid("composition produced a zero denominator"));
        }
        RationalFunction::new(
            num.iter().map(|&z| z / lead).collect(),
            den.iter().map(|&z| z / lead).collect(),
        )
    }
}

/// Möbius map `g_λ(z) = (λ + z)/(1 + λ̄z)` for `|λ| < 1`.
pub fn mobius(lambda: Complex64) -> Result<RationalFunction> {
    if !(lambda.norm() < 1.0) {
        return Err(Error::invalid(format!("Möbius parameter must satisfy |λ| < 1, got {lambda}")));
    }
    RationalFunction::new(vec![lambda, ONE], vec![ONE, lambda.conj()])
}

/// Finite Blaschke product `phase · Π_j g_{−a_j}(z)`.
///
/// Each factor is written in the `g_λ` form with `λ = −a_j`, i.e.
/// `(z − a_j)/(1 − ā_j z)`, so `a_j` is a genuine zero of the product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeSpec {
    #[serde(with = "crate::json::complex_vec")]
    pub zeros: Vec<Complex64>,
    #[serde(rename = "phase", with = "crate::json::complex")]
    pub unimodular_factor: Complex64,
}

impl BlaschkeSpec {
    pub fn new(zeros: Vec<Complex64>, unimodular_factor: Complex64) -> Result<Self> {
        let spec = BlaschkeSpec {
            zeros,
            unimodular_factor,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(z) = self.zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(Error::invalid(format!("Blaschke zero {z} is not inside the unit disk")));
        }
        if !((self.unimodular_factor.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::invalid(format!(
                "Blaschke phase {} is not unimodular",
                self.unimodular_factor
            )));
        }
        Ok(())
    }

    pub fn to_rational(&self) -> Result<RationalFunction> {
        self.validate()?;
        let mut num = vec![self.unimodular_factor];
        let mut den = vec![ONE];
        for &a in &self.zeros {
            num = poly::mul(&num, &[-a, ONE]);
            den = poly::mul(&den, &[ONE, -a.conj()]);
        }
        RationalFunction::new(num, den)
    }
}
