use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: entries ({row}, {col}) and ({col}, {row}) differ by {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("near-singular shift at {at}: smallest singular value {sigma_min:e}")]
    Singular { at: Complex64, sigma_min: f64 },

    #[error("spectral radius {spectral_radius} is not inside the open unit disk; retract the spectrum first")]
    SpectrumNotInDisk { spectral_radius: f64 },

    #[error("rational function has a pole at modulus {modulus} (must be >= 1 + 1e-9)")]
    PoleInDisk { modulus: f64 },

    #[error("hypothesis violated: {hypothesis} (measured {measured})")]
    Hypothesis { hypothesis: String, measured: f64 },

    #[error("{what} did not converge after {iterations} iterations: {detail}")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        detail: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn hypothesis(hypothesis: impl Into<String>, measured: f64) -> Self {
        Error::Hypothesis {
            hypothesis: hypothesis.into(),
            measured,
        }
    }
}
