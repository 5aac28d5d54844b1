//! Rational functions on the closed unit disk and their matrix functional
//! calculus.
//!
//! A [`RationalFunction`] `p/q` is only constructed when every root of `q`
//! lies outside the closed disk (by a margin of [`rational::POLE_MARGIN`]), so
//! `f(A)` is defined for every matrix whose spectrum lies in the disk. The
//! calculus is available in two forms: directly as `p(A)·q(A)^{-1}`
//! ([`eval_matrix`]) and as the Cauchy contour integral
//! `∫ f(σ)(σI − A)^{-1} dσ/(2πi)` over the unit circle ([`cauchy_calculus`]).

mod calculus;
pub(crate) mod poly;
pub mod rational;

pub use calculus::{
    cauchy_calculus, eval_matrix, herglotz_residual, poisson_identity_residual, sup_norm, BoundaryGrid, QUADRATURE_CAP,
    QUADRATURE_TOL,
};
pub use rational::{mobius, BlaschkeSpec, RationalFunction};
