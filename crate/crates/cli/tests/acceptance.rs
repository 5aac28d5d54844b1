//! Acceptance suite. Run with `--nocapture` to see one line per criterion.

use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rhocalc::bounds::{bck_constant, k_drury, k_rho, quadratic_residual, technical_f, technical_f_ratio};
use rhocalc::contraction::{numerical_radius_oracle, rho_radius, Rho, DEFAULT_RADIUS_TOL};
use rhocalc::linalg::{op_norm, spectral_radius, Matrix};
use rhocalc::witness::{derive_seed, gaussian_matrix, k_curve, sharpness_scan, unit_grid, SeededRng, FIGURE_RHOS};
use rhocalc_cli::campaign::{run_identities, run_scan, Identity, ScanCheck, ScanOutcome};
use rhocalc_cli::commands::check_report;

const SEED: u64 = 20240501;

fn report(criterion: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {criterion:>2} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn random_matrix(seed: u64, dims: (usize, usize)) -> Matrix {
    let mut rng = SeededRng::new(seed);
    let dim = rng.int_range(dims.0, dims.1);
    let scale = rng.uniform_range(0.2, 3.0);
    let g = gaussian_matrix(dim, &mut rng);
    g.scale_real(scale / op_norm(&g))
}

#[test]
fn criterion_01_radius_ground_truths() {
    let start = Instant::now();
    let (mut err1, mut err2) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let a = random_matrix(derive_seed(SEED, i), (2, 6));
        let w1 = rho_radius(&a, Rho::new(1.0).unwrap(), DEFAULT_RADIUS_TOL, 1024).unwrap().value;
        let w2 = rho_radius(&a, Rho::new(2.0).unwrap(), DEFAULT_RADIUS_TOL, 1024).unwrap().value;
        err1 = err1.max((w1 - op_norm(&a)).abs());
        err2 = err2.max((w2 - numerical_radius_oracle(&a, 4096).unwrap()).abs());
    }
    let elapsed = start.elapsed();
    report(
        1,
        "radius ground truths",
        err1 <= 1e-7 && err2 <= 1e-6 && elapsed < Duration::from_secs(60),
        format!("max |w_1 - op_norm| = {err1:.2e}, max |w_2 - oracle| = {err2:.2e}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_nilpotent_family() {
    let mut worst = 0.0f64;
    for rho in [1.0, 1.25, 1.5, 1.75, 2.0, 3.0] {
        for c in [0.5, 1.0, rho] {
            let a = Matrix::from_real_rows(&[&[0.0, c], &[0.0, 0.0]]).unwrap();
            let w = rho_radius(&a, Rho::new(rho).unwrap(), DEFAULT_RADIUS_TOL, 4096).unwrap().value;
            worst = worst.max((w - c / rho).abs());
        }
    }
    report(2, "nilpotent family", worst <= 1e-6, format!("max |w_rho - c/rho| = {worst:.2e} over 18 cases"));
}

#[test]
fn criterion_03_characterization_equivalence() {
    let (mut total, mut agree, mut positive) = (0usize, 0usize, 0usize);
    for (k, rho) in [1.0, 1.3, 2.0, 3.0].into_iter().enumerate() {
        for i in 0..200 {
            let mut rng = SeededRng::new(derive_seed(derive_seed(SEED, 3 + k as u64), i));
            let dim = rng.int_range(2, 4);
            let target = rng.uniform_range(0.05, 0.95);
            let g = gaussian_matrix(dim, &mut rng);
            let a = g.scale_real(target / spectral_radius(&g).unwrap());
            let r = check_report(&a, Rho::new(rho).unwrap(), 512).unwrap();
            total += 1;
            agree += r.agree as usize;
            positive += r.boundary.is_positive() as usize;
        }
    }
    report(
        3,
        "characterization equivalence",
        agree == total,
        format!("{agree}/{total} verdicts agree ({positive} positive, {} violated)", total - positive),
    );
}

#[test]
fn criterion_04_identities() {
    let outcome = run_identities(SEED, 500, 4096).unwrap();
    let max = |id: Identity| outcome.maxima.iter().find(|m| m.identity == id).unwrap();
    let herglotz = max(Identity::Herglotz).max_residual;
    let contracts_hold = [Identity::BoundaryKernel, Identity::Cayley, Identity::Poisson]
        .into_iter()
        .all(|id| max(id).max_ratio <= 1.0);
    report(
        4,
        "identities",
        contracts_hold && herglotz <= 1e-6,
        format!(
            "boundary ratio {:.2e}, cayley ratio {:.2e}, poisson ratio {:.2e}, herglotz max {herglotz:.2e}",
            max(Identity::BoundaryKernel).max_ratio,
            max(Identity::Cayley).max_ratio,
            max(Identity::Poisson).max_ratio,
        ),
    );
}

#[test]
fn criterion_05_bound_algebra() {
    let two = Rho::new(2.0).unwrap();
    let drury = (0..=10000)
        .map(|i| i as f64 / 10000.0)
        .map(|s| (k_rho(two, s).unwrap() - k_drury(s).unwrap()).abs())
        .fold(0.0, f64::max);
    let (mut quad, mut lemma_ok) = (0.0f64, true);
    for i in 0..=40 {
        let rho_v = 1.0 + 4.0 * i as f64 / 40.0;
        let rho = Rho::new(rho_v).unwrap();
        let mut prev = 0.0;
        for j in 0..=100 {
            let s = j as f64 / 100.0;
            quad = quad.max(quadratic_residual(rho, s).unwrap() / rho_v.powi(2).max(1.0));
            if rho_v > 1.0 && j > 0 && j < 100 {
                let f = technical_f(rho, s).unwrap();
                let ratio = technical_f_ratio(rho, s).unwrap();
                lemma_ok &= f < 0.0 && f > -(1.0 - 1.0 / rho_v) && f < prev && (f - ratio).abs() <= 1e-12;
                prev = f;
            }
        }
    }
    let bck = bck_constant(two);
    report(
        5,
        "bound algebra",
        drury <= 1e-12 && quad <= 1e-12 && lemma_ok && bck == 1.25,
        format!("k_2 vs Drury {drury:.2e}, scaled quadratic residual {quad:.2e}, range/monotonicity {lemma_ok}, bck(2) = {bck}"),
    );
}

const CAMPAIGN_RHOS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];
const CAMPAIGN_SAMPLES: usize = 250;

struct Campaign {
    outcomes: Vec<ScanOutcome>,
    elapsed: Duration,
}

fn campaign() -> &'static Campaign {
    static CAMPAIGN: OnceLock<Campaign> = OnceLock::new();
    CAMPAIGN.get_or_init(|| {
        let start = Instant::now();
        let outcomes = CAMPAIGN_RHOS
            .iter()
            .map(|&rho| run_scan(Rho::new(rho).unwrap(), SEED, CAMPAIGN_SAMPLES))
            .collect();
        Campaign {
            outcomes,
            elapsed: start.elapsed(),
        }
    })
}

#[test]
fn criterion_06_main_bound() {
    let c = campaign();
    let rows: Vec<_> = c.outcomes.iter().flat_map(|o| &o.rows).filter(|r| r.check == ScanCheck::NormBound).collect();
    let unresolved: usize = c.outcomes.iter().map(|o| o.summary.unresolved.len()).sum();
    let violations = rows.iter().filter(|r| r.value > r.bound + 1e-8).count();
    let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    report(
        6,
        "norm bound campaign",
        rows.len() >= 1000 && violations == 0 && unresolved == 0 && c.elapsed < Duration::from_secs(600),
        format!(
            "{} pairs, {violations} violations, {unresolved} unresolved samples, min slack {min_slack:.2e}, {:.2?}",
            rows.len(),
            c.elapsed
        ),
    );
}

#[test]
fn criterion_07_zero_preservation_and_cassier_suciu() {
    let c = campaign();
    let rows = || c.outcomes.iter().flat_map(|o| &o.rows);
    let worst = |check| {
        let values: Vec<f64> = rows().filter(|r| r.check == check).map(|r| r.value).collect();
        (values.len(), values.into_iter().fold(0.0, f64::max))
    };
    let (n_zero, w_zero) = worst(ScanCheck::ZeroPreservation);
    let (n_cs, w_cs) = worst(ScanCheck::CassierSuciu);
    report(
        7,
        "zero preservation and Cassier-Suciu",
        n_zero > 0 && n_cs > 0 && w_zero <= 1.0 + 1e-6 && w_cs <= 1.0 + 1e-6,
        format!("max w_rho(f(A)) = {w_zero:.9} over {n_zero}, max w_rho_f(f(A)) = {w_cs:.9} over {n_cs}"),
    );
}

#[test]
fn criterion_08_sharpness() {
    let dir = tempfile::tempdir().unwrap();
    let out = rhocalc(&["sharpness", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let s_grid = unit_grid(101);
    let (mut gap, mut curve_err, mut endpoint_err) = (0.0f64, 0.0f64, 0.0f64);
    for rho_v in FIGURE_RHOS {
        let rho = Rho::new(rho_v).unwrap();
        gap = sharpness_scan(rho, &s_grid).unwrap().iter().map(|r| r.gap).fold(gap, f64::max);
        let text = std::fs::read_to_string(dir.path().join(format!("k_rho_{rho_v:.2}.csv"))).unwrap();
        let emitted: Vec<(f64, f64)> = text
            .lines()
            .skip(2)
            .map(|l| {
                let cols: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
                (cols[1], cols[2])
            })
            .collect();
        assert_eq!(emitted.len(), 101);
        for (&(s, k), point) in emitted.iter().zip(k_curve(rho)) {
            curve_err = curve_err.max((k - point.k).abs()).max((k - k_rho(rho, s).unwrap()).abs());
        }
        endpoint_err = endpoint_err.max((emitted[0].1 - rho_v).abs()).max((emitted[100].1 - 1.0).abs());
    }
    report(
        8,
        "sharpness and curves",
        gap <= 1e-9 && curve_err == 0.0 && endpoint_err <= 1e-12,
        format!("max gap {gap:.2e}, emitted curve error {curve_err:.1e}, endpoint error {endpoint_err:.1e}"),
    );
}

#[test]
fn criterion_09_okubo_ando() {
    let c = campaign();
    let mut ok = true;
    let mut detail = Vec::new();
    for (o, &rho_v) in c.outcomes.iter().zip(&CAMPAIGN_RHOS) {
        let rho = Rho::new(rho_v).unwrap();
        let norm_rows: Vec<_> = o.rows.iter().filter(|r| r.check == ScanCheck::NormBound).collect();
        ok &= norm_rows.iter().all(|r| r.value <= rho_v + 1e-8);
        let mut maxima = Vec::new();
        for bin in 0..4 {
            let lo = bin as f64 / 4.0;
            let m = norm_rows
                .iter()
                .filter(|r| r.abs_f0 >= lo && r.abs_f0 < lo + 0.25)
                .map(|r| r.value)
                .fold(0.0, f64::max);
            ok &= m <= k_rho(rho, lo).unwrap() + 1e-8;
            maxima.push(format!("{m:.3}"));
        }
        detail.push(format!("rho {rho_v}: [{}]", maxima.join(", ")));
    }
    report(
        9,
        "Okubo-Ando corollary",
        ok,
        format!("binned max ||f(A)|| by |f(0)| quartile, {}", detail.join("; ")),
    );
}

fn rhocalc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rhocalc")).args(args).output().unwrap()
}

fn artifacts(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let d = dir.to_str().unwrap();
    let runs: [&[&str]; 4] = [
        &["scan", "--samples", "60", "--rho", "1.5", "--format", "csv", "--out", &format!("{d}/scan.csv")],
        &["scan", "--samples", "60", "--rho", "2", "--format", "json", "--out", &format!("{d}/scan.json")],
        &["identities", "--samples", "60", "--format", "csv", "--out", &format!("{d}/identities.csv")],
        &["sharpness", "--out", d],
    ];
    for args in runs {
        let out = rhocalc(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_10_determinism() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = artifacts(a.path());
    let second = artifacts(b.path());
    let identical = first == second;
    report(
        10,
        "determinism",
        identical && first.len() == 9,
        format!("{} artifacts, byte-identical across runs: {identical}", first.len()),
    );
}
