use proptest::test_runner::{Config, RngSeed};

use crate::linalg::{op_norm, spectral_radius, Matrix};
use crate::witness::{gaussian_matrix, SeededRng};

/// Deterministic proptest configuration with `cases` cases.
pub fn fixed_config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn gaussian(dim: usize, seed: u64) -> Matrix {
    gaussian_matrix(dim, &mut SeededRng::new(seed))
}

/// Gaussian matrix rescaled to spectral radius `target`, or to norm `target`
/// when the draw is nilpotent to working precision.
pub fn with_spectral_radius(dim: usize, seed: u64, target: f64) -> Matrix {
    let g = gaussian(dim, seed);
    let r = spectral_radius(&g).unwrap();
    if r > 1e-8 {
        g.scale_real(target / r)
    } else {
        g.scale_real(target / op_norm(&g))
    }
}

pub fn with_norm(dim: usize, seed: u64, target: f64) -> Matrix {
    let g = gaussian(dim, seed);
    g.scale_real(target / op_norm(&g))
}
