//! Seeded random source shared by every randomized suite.
//!
//! The stream is SplitMix64 (state initialized to the seed, output of the
//! reference `splitmix64.c`). Derived quantities are specified so that other
//! implementations can reproduce identical instances:
//!
//! - `uniform`: `(next_u64 >> 11) · 2^-53`, in `[0, 1)`.
//! - `normal`: Box–Muller cosine branch, `sqrt(−2 ln(1 − u1)) · cos(2π u2)`
//!   with `u1`, `u2` two consecutive uniforms.
//! - `complex_normal`: `(x + i y)/√2` with `x`, `y` two consecutive normals.
//! - `derive_seed(master, i)`: first output of SplitMix64 seeded with
//!   `master ^ (i · 0xD1B54A32D192ED03)`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Debug, Clone)]
pub struct SeededRng(SplitMix64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.uniform() * (hi - lo + 1) as f64) as usize
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (TAU * u2).cos()
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        let x = self.normal();
        let y = self.normal();
        Complex64::new(x, y) * FRAC_1_SQRT_2
    }

    pub fn unit_phase(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.uniform())
    }

    /// Uniform with respect to area in the disk `|z| < radius`.
    pub fn in_disk(&mut self, radius: f64) -> Complex64 {
        let r = radius * self.uniform().sqrt();
        Complex64::from_polar(r, TAU * self.uniform())
    }
}

pub fn derive_seed(master: u64, index: u64) -> u64 {
    SeededRng::new(master ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03)).next_u64()
}
