mod common;

use common::{fixed_config, with_norm, with_spectral_radius};
use proptest::prelude::*;
use rhocalc::contraction::Rho;
use rhocalc::funcalc::{
    cauchy_calculus, eval_matrix, herglotz_residual, poisson_identity_residual, sup_norm, BlaschkeSpec, BoundaryGrid,
};
use rhocalc::linalg::{norm_diff, op_norm};
use rhocalc::witness::{random_blaschke, random_rational, SeededRng};
use rhocalc::Complex64;

proptest! {
    #![proptest_config(fixed_config(300))]

    #[test]
    fn cauchy_integral_matches_direct_evaluation(seed in any::<u64>(), dim in 1usize..5, radius in 0.0f64..0.9) {
        let a = with_spectral_radius(dim, seed, radius);
        let f = random_rational(6, seed ^ 0xf00d).unwrap();
        let direct = eval_matrix(&f, &a).unwrap();
        let quad = cauchy_calculus(&f, &a, BoundaryGrid::new(64).unwrap()).unwrap();
        let err = norm_diff(&direct, &quad);
        prop_assert!(err <= 1e-8 * op_norm(&direct).max(1.0), "error {}", err);
    }
}

proptest! {
    #![proptest_config(fixed_config(200))]

    #[test]
    fn calculus_is_multiplicative(seed in any::<u64>(), dim in 1usize..5, radius in 0.0f64..0.95) {
        let a = with_spectral_radius(dim, seed, radius);
        let f = random_rational(3, seed.wrapping_add(1)).unwrap();
        let g = random_rational(3, seed.wrapping_add(2)).unwrap();
        let fg = eval_matrix(&f.mul(&g), &a).unwrap();
        let prod = &eval_matrix(&f, &a).unwrap() * &eval_matrix(&g, &a).unwrap();
        let err = norm_diff(&fg, &prod);
        prop_assert!(err <= 1e-9 * op_norm(&prod).max(1.0), "error {}", err);
    }

    #[test]
    fn calculus_respects_composition(seed in any::<u64>(), dim in 1usize..4, radius in 0.0f64..0.9,
                                     deg_g in 1usize..3) {
        let a = with_spectral_radius(dim, seed, radius);
        let f = random_rational(3, seed.wrapping_add(3)).unwrap();
        let g = random_blaschke(deg_g, seed.wrapping_add(4), false).unwrap();
        let direct = eval_matrix(&f.compose(&g).unwrap(), &a).unwrap();
        let nested = eval_matrix(&f, &eval_matrix(&g, &a).unwrap()).unwrap();
        let err = norm_diff(&direct, &nested);
        prop_assert!(err <= 1e-8 * op_norm(&nested).max(1.0), "error {}", err);
    }

    #[test]
    fn sup_norm_dominates_interior_values(seed in any::<u64>(), blaschke in any::<bool>()) {
        let f = if blaschke {
            random_blaschke(1 + (seed % 5) as usize, seed, false).unwrap()
        } else {
            random_rational(5, seed).unwrap()
        };
        let sup = sup_norm(&f, BoundaryGrid::new(64).unwrap());
        let mut rng = SeededRng::new(seed ^ 0xabc);
        for _ in 0..100 {
            let z = rng.in_disk(1.0);
            let v = f.eval(z).unwrap().norm();
            prop_assert!(v <= sup * (1.0 + 1e-12), "|f({})| = {} > {}", z, v, sup);
        }
    }
}

proptest! {
    #![proptest_config(fixed_config(100))]

    #[test]
    fn poisson_identity_holds(seed in any::<u64>(), deg in 1usize..5, dim in 1usize..5, norm in 0.05f64..0.8) {
        let a = with_norm(dim, seed, norm);
        let f = random_blaschke(deg, seed ^ 0x77, false).unwrap();
        let res = poisson_identity_residual(&f, &a, BoundaryGrid::new(64).unwrap()).unwrap();
        prop_assert!(res <= 1e-8 * op_norm(&a).max(1.0), "residual {}", res);
    }
}

#[test]
fn herglotz_residual_shrinks_under_refinement() {
    let f = BlaschkeSpec::new(vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.2)], Complex64::new(0.0, 1.0))
        .unwrap()
        .to_rational()
        .unwrap();
    let a = with_norm(3, 99, 0.7);
    let rho = Rho::new(1.8).unwrap();
    let tau = Complex64::from_polar(1.0, 0.7);
    let residuals: Vec<f64> = [64, 128, 256, 512]
        .iter()
        .map(|&n| herglotz_residual(&f, &a, rho, tau, 0.99, BoundaryGrid::new(n).unwrap()).unwrap())
        .collect();
    for w in residuals.windows(2) {
        assert!(w[1] < w[0], "residuals {residuals:?}");
    }
}

#[test]
fn herglotz_residual_is_small_on_fine_grids() {
    for seed in 0..20u64 {
        let f = random_blaschke(1 + (seed % 3) as usize, seed, true).unwrap();
        let a = with_spectral_radius(1 + (seed % 4) as usize, seed, 0.8);
        let rho = Rho::new(1.0 + (seed % 4) as f64 * 0.7).unwrap();
        let tau = SeededRng::new(seed).unit_phase();
        let r = herglotz_residual(&f, &a, rho, tau, 0.9, BoundaryGrid::new(4096).unwrap()).unwrap();
        assert!(r <= 1e-6, "seed {seed}: residual {r}");
    }
}
