#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};
use rhocalc::linalg::{op_norm, spectral_radius, Matrix};
use rhocalc::witness::{gaussian_matrix, SeededRng};

pub fn fixed_config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn with_spectral_radius(dim: usize, seed: u64, target: f64) -> Matrix {
    let g = gaussian_matrix(dim, &mut SeededRng::new(seed));
    let r = spectral_radius(&g).unwrap();
    if r > 1e-8 {
        g.scale_real(target / r)
    } else {
        g.scale_real(target / op_norm(&g))
    }
}

pub fn with_norm(dim: usize, seed: u64, target: f64) -> Matrix {
    let g = gaussian_matrix(dim, &mut SeededRng::new(seed));
    g.scale_real(target / op_norm(&g))
}
