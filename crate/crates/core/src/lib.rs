//! Numerical ρ-radius of complex matrices, rational functional calculus on the
//! closed unit disk, and concrete verifiers for von Neumann-type inequalities
//! satisfied by ρ-contractions.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Hermitian and general eigenvalues,
//!   norms and resolvents.
//! - [`contraction`]: the two positivity characterizations of ρ-contractions,
//!   the identities behind them and the numerical ρ-radius `w_ρ`.
//! - [`funcalc`]: rational functions, Möbius/Blaschke factors and their matrix
//!   functional calculus, including the Cauchy and Poisson integral forms.
//! - [`bounds`]: the sharp bound function `k_ρ`, comparison constants and
//!   theorem verifiers on concrete `(A, f)` pairs.
//! - [`witness`]: the sharpness construction and seeded random instances.

pub mod bounds;
pub mod contraction;
mod error;
pub mod json;
pub mod funcalc;
pub mod linalg;
pub mod witness;

#[cfg(test)]
mod test_util;

pub use error::{Error, Result};
pub use num_complex::Complex64;
