//! Verification suites: fixed sets of identity checks with seeded inputs.

use rand::Rng;
use serde::Serialize;

use crate::bspline::{self, ComplexBSpline};
use crate::differences::{self, HgConfig};
use crate::dirichlet::{self, average_mc, KnotVector, WeightVector};
use crate::fractional;
use crate::multivariate::{self, Direction, EquidistantRay};
use crate::numerics::{seeded_rng, ExpPoly, FracOrder, Grid, McConfig};
use crate::report::{Comparison, VerificationReport};
use crate::weighted::{self, Bandwidth, WeightedSpline};
use crate::C64;

/// Monte Carlo sample count used throughout the suites.
pub const SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Bspline,
    Fractional,
    Differences,
    Dirichlet,
    Weighted,
    Multivariate,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Runs a suite. The output depends only on `(suite, seed)`.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<VerificationReport> {
    match suite {
        Suite::All => [
            Suite::Bspline,
            Suite::Fractional,
            Suite::Differences,
            Suite::Dirichlet,
            Suite::Weighted,
            Suite::Multivariate,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, seed))
        .collect(),
        Suite::Bspline => bspline_suite(seed),
        Suite::Fractional => fractional_suite(seed),
        Suite::Differences => differences_suite(seed),
        Suite::Dirichlet => dirichlet_suite(seed),
        Suite::Weighted => weighted_suite(seed),
        Suite::Multivariate => multivariate_suite(seed),
    }
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

/// Random `(z, x)` pairs with `Re z` in `[lo, hi)`, `|Im z| < 1`, `x` in `[0, 8)`.
pub fn random_orders(seed: u64, stream: u64, n: usize, lo: f64, hi: f64) -> Vec<(C64, f64)> {
    let mut rng = seeded_rng(seed, stream);
    (0..n)
        .map(|_| {
            let z = c(rng.random_range(lo..hi), rng.random_range(-1.0..1.0));
            (z, rng.random_range(0.0..8.0))
        })
        .collect()
}

pub fn bspline_suite(seed: u64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let pts: Vec<f64> = (0..1000).map(|i| -0.5 + 6.5 * i as f64 / 999.0).collect();
    for n in 2..=5 {
        out.push(bspline::integer_reduction_check(n, &pts));
    }
    let mut rng = seeded_rng(seed, 1);
    let unit: Vec<f64> = (0..100).map(|_| rng.random_range(-3.0..3.0)).collect();
    for n in 2..=4 {
        out.push(bspline::partition_of_unity_check(n, &unit));
    }
    for z in [c(2.5, 0.0), c(2.5, 1.0), c(3.2, -0.7)] {
        out.push(bspline::fourier_consistency_check(z));
    }
    let grid = Grid::span(0.0, 10.0, 1.0 / 256.0).expect("static grid");
    for (z1, z2) in [(c(2.0, 0.0), c(3.0, 0.0)), (c(1.5, 0.5), c(1.5, -0.5)), (c(2.5, 1.0), c(1.8, -0.3))] {
        out.push(bspline::convolve_check(z1, z2, &grid));
    }
    out.push(bspline::recursion_check(&random_orders(seed, 2, 200, 2.2, 6.0)));
    out.push(bspline::series_forms_check(&random_orders(seed, 3, 100, 1.2, 6.0)));
    for (z, m) in [(c(2.5, 0.0), 3), (c(2.5, 1.0), 3), (c(4.0, 0.0), 4)] {
        out.push(bspline::decay_check(z, m));
    }
    let freqs: Vec<f64> = (1..=80).map(|j| -20.0 + 0.5 * j as f64 + 0.01).collect();
    out.push(bspline::spectrum_structure_check(c(2.0, 1.0), &freqs));
    out.push(bspline::spectrum_structure_check(c(3.2, -0.7), &freqs));
    for n in 2..=4 {
        out.push(bspline::symbol_zero_check(n, &[-3, -2, -1, 1, 2, 3]));
    }
    out
}

pub fn fractional_suite(seed: u64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let f = ExpPoly::power_exp(2);
    let pts = [0.5, 1.0, 2.0];
    let mut rng = seeded_rng(seed, 10);
    let mut order = |lo: f64, hi: f64| c(rng.random_range(lo..hi), rng.random_range(-0.5..0.5));
    let pairs: Vec<(C64, C64)> = (0..10).map(|_| (order(0.2, 1.5), order(0.2, 1.5))).collect();
    for (z1, z2) in pairs {
        let (a, b) = (FracOrder::new(z1), FracOrder::new(z2));
        out.push(match (a, b) {
            (Ok(a), Ok(b)) => fractional::semigroup_check(&f, &a, &b, &pts),
            (Err(e), _) | (_, Err(e)) => VerificationReport::builder("fractional.semigroup").failed(&e),
        });
    }
    let orders: Vec<C64> = (0..6).map(|_| order(0.3, 2.5)).collect();
    for z in orders {
        out.push(match FracOrder::new(z) {
            Ok(z) => fractional::inverse_check(&f, &z, &pts),
            Err(e) => VerificationReport::builder("fractional.inverse").failed(&e),
        });
    }
    for (z1, z2) in [(c(0.5, 0.0), c(0.5, 0.0)), (c(0.7, 0.3), c(1.2, -0.3)), (c(1.5, 1.0), c(0.4, 0.2))] {
        out.push(fractional::kernel_semigroup_check(z1, z2, &[0.5, 1.0, 2.0, 5.0]));
    }
    out.push(fractional::delta_pair_check(c(2.0, 0.0), 0, &ExpPoly::gaussian(0.5, 1.0)));
    out.push(fractional::delta_pair_check(c(2.5, 0.0), 1, &ExpPoly::gaussian(1.0, 1.0)));
    out.push(fractional::delta_pair_check(c(2.0, 1.0), 2, &ExpPoly::gaussian(2.0, 2.0)));
    out
}

/// `[z; N_0]` applied to `t ↦ (x - t)_+^{z-1} / Γ(z)` reproduces `B_z(x)`.
pub fn divided_difference_chain_check(samples: &[(C64, f64)]) -> VerificationReport {
    let b = VerificationReport::builder("differences.spline_chain").param("samples", samples.len() as u64);
    let mut worst = 0.0f64;
    for &(z, x) in samples {
        let r = ComplexBSpline::new(z)
            .and_then(|s| Ok((differences::spline_from_divided_diff(z, x)? - s.eval_time(x).value).norm()));
        match r {
            Ok(d) => worst = worst.max(d),
            Err(e) => return b.failed(&e),
        }
    }
    b.finish(worst, 1e-9, None)
}

pub fn differences_suite(seed: u64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    out.push(divided_difference_chain_check(&random_orders(seed, 20, 100, 1.2, 5.0)));
    let bump = ExpPoly::gaussian(2.0, 1.0);
    let cubic = ExpPoly::power_exp(3);
    out.push(differences::normalization_check(&cubic, c(2.0, 0.0)));
    out.push(differences::normalization_check(&cubic, c(3.0, 0.0)));
    out.push(differences::normalization_check(&bump, c(2.5, 0.0)));
    out.push(differences::normalization_check(&bump, c(2.5, 0.5)));
    out.push(differences::weak_integral_identity(&ExpPoly::exp_decay(), c(2.0, 0.0)));
    out.push(differences::weak_integral_identity(&bump, c(2.5, 0.5)));
    let g = ExpPoly::gaussian(3.0, 1.0);
    for (i, z) in [c(2.0, 0.0), c(2.5, 0.0)].into_iter().enumerate() {
        let cfg = HgConfig {
            mc: McConfig::new(SAMPLES, seed, 21 + i as u64),
            truncation: 16,
        };
        out.push(differences::hermite_genocchi_check(&g, z, cfg));
    }
    out
}

/// Knots that all coincide give an exact average with zero variance.
pub fn constant_knot_check(seed: u64, stream: u64) -> VerificationReport {
    let b = WeightVector::positive(&[1.0, 2.0, 0.5]).expect("positive weights");
    let tau = KnotVector::scalar(&[2.0, 2.0, 2.0]).expect("finite knots");
    let f = |x: &[f64]| c(x[0].exp(), 0.0);
    let rb = VerificationReport::builder("dirichlet.constant_knots")
        .param("knots", vec![2.0, 2.0, 2.0])
        .param("samples", SAMPLES as u64);
    match average_mc(&f, &b, &tau, McConfig::new(SAMPLES, seed, stream)) {
        Ok(e) => rb
            .complex("estimate", e.estimate)
            .param("stderr", e.stderr)
            .finish_worst(vec![
                Comparison::new("value", (e.estimate - 2f64.exp()).norm(), 0.0, None),
                Comparison::new("variance", e.stderr, 0.0, None),
            ]),
        Err(e) => rb.failed(&e),
    }
}

pub fn dirichlet_suite(seed: u64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let cfg = |stream: u64| McConfig::new(SAMPLES, seed, stream);
    let w = |b: &[f64]| WeightVector::positive(b).expect("positive weights");
    let k = |t: &[f64]| KnotVector::scalar(t).expect("finite knots");
    out.push(dirichlet::moment_identity_check(&w(&[1.0, 1.0, 1.0]), 0, cfg(30)));
    out.push(dirichlet::moment_identity_check(&w(&[5.0, 1.0]), 1, cfg(31)));
    out.push(dirichlet::moment_identity_check(&w(&[2.0, 0.5, 1.5]), 2, cfg(32)));
    let exp = |x: f64| c(x.exp(), 0.0);
    let osc = |x: f64| c(x.cos(), x.sin());
    out.push(dirichlet::weight_shift_check(&exp, &w(&[1.0, 2.0]), &k(&[0.0, 1.0]), 0, cfg(33)));
    out.push(dirichlet::weight_shift_check(&osc, &w(&[0.5, 1.0, 1.5]), &k(&[0.0, 1.0, 3.0]), 2, cfg(34)));
    out.push(dirichlet::g_expansion_check(&exp, &w(&[1.0, 1.0]), &k(&[0.0, 1.0]), cfg(42)));
    out.push(dirichlet::g_expansion_check(&osc, &w(&[2.0, 1.0, 0.5]), &k(&[-1.0, 0.5, 2.0]), cfg(36)));
    out.push(dirichlet::symmetry_checks(&exp, &w(&[1.0, 2.0, 1.5]), &k(&[0.0, 1.0, 3.0]), &[2, 0, 1], cfg(37)));
    out.push(constant_knot_check(seed, 38));
    let g = ExpPoly::gaussian(1.0, 1.0);
    for (i, z) in [c(0.5, 0.0), c(1.0, 0.0), c(0.7, 0.4)].into_iter().enumerate() {
        out.push(match FracOrder::new(z) {
            Ok(z) => dirichlet::frac_interchange_check(&g, &w(&[1.0, 1.0]), &k(&[0.0, 1.0]), &z, cfg(39 + i as u64)),
            Err(e) => VerificationReport::builder("dirichlet.frac_interchange").failed(&e),
        });
    }
    out
}

pub fn weighted_suite(seed: u64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let cfg = |stream: u64| McConfig::new(SAMPLES, seed, stream);
    let w = |b: &[f64]| WeightVector::positive(b).expect("positive weights");
    let k = |t: &[f64]| KnotVector::scalar(t).expect("finite knots");
    let configs = [
        (c(2.0, 0.0), w(&[1.0, 1.0, 1.0]), k(&[0.0, 1.0, 2.0]), ExpPoly::gaussian(1.0, 1.0)),
        (c(2.5, 0.0), w(&[2.0, 1.0, 1.0]), k(&[0.0, 1.0, 3.0]), ExpPoly::gaussian(1.5, 1.0)),
        (c(2.5, 0.5), w(&[1.0, 2.0]), k(&[0.0, 2.0]), ExpPoly::gaussian(1.0, 1.0)),
    ];
    for (i, (z, b, t, g)) in configs.into_iter().enumerate() {
        let stream = 50 + i as u64;
        out.push(match WeightedSpline::new(z, b, t, cfg(stream), Bandwidth::default()) {
            Ok(s) => weighted::defining_identity_check(&s, &g, cfg(stream)),
            Err(e) => VerificationReport::builder("weighted.defining_identity").failed(&e),
        });
    }
    let h = Bandwidth::Silverman(2.0);
    out.push(weighted::dirichlet_spline_integer_check(&w(&[1.0; 3]), &k(&[0.0, 1.0, 2.0]), 2, cfg(53), h));
    out.push(weighted::dirichlet_spline_integer_check(&w(&[1.0; 4]), &k(&[0.0, 1.0, 2.5, 3.0]), 3, cfg(54), h));
    out.push(weighted::dirichlet_spline_integer_check(&w(&[1.5, 1.0, 1.5]), &k(&[0.0, 1.0, 2.0]), 3, cfg(55), h));
    out
}

/// Interior points for the time/frequency comparison at `s = 2`.
pub const DUALITY_POINTS: [[f64; 2]; 6] = [[1.5, 0.7], [3.3, -0.4], [0.5, 1.0], [2.2, 1.5], [4.7, 0.3], [-0.5, 0.5]];

pub fn multivariate_suite(seed: u64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let ray = |d: Vec<f64>, z: C64| EquidistantRay::new(d, z).expect("valid ray");
    let dir = |v: &[f64]| Direction::new(v).expect("valid direction");
    for (z, d, l) in [(2.0, vec![1.0, 0.5], vec![1.0, 0.5]), (3.0, vec![1.0, 0.0], vec![0.6, 0.8])] {
        out.push(multivariate::mv_zero_check(&ray(d, c(z, 0.0)), &dir(&l), &[-2, -1, 1, 2, 3]));
    }
    let mut rng = seeded_rng(seed, 60);
    let samples: Vec<(Direction, f64)> = (0..50)
        .map(|_| {
            let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            (dir(&[a.cos(), a.sin()]), rng.random_range(0.0..30.0))
        })
        .collect();
    out.push(multivariate::projection_law_check(&ray(vec![1.0, 0.5], c(2.5, 0.3)), &samples));
    out.push(multivariate::mv_duality_check(&ray(vec![1.0, 0.0], c(2.5, 0.3)), &DUALITY_POINTS, 256, 64.0));
    let grid = Grid::span(-4.0, 8.0, 0.125).expect("static grid");
    out.push(multivariate::ridge_consistency_check(
        &ray(vec![1.0, 0.5], c(2.5, 0.0)),
        &dir(&[1.0, 0.5]),
        &ExpPoly::gaussian(2.0, 1.0),
        &grid,
    ));
    out.push(multivariate::exp_spline_reduction_check(c(2.0, 0.0), &Grid::span(-1.0, 3.0, 0.02).expect("static grid")));
    out.push(multivariate::exp_spline_reduction_check(c(2.5, 0.5), &Grid::span(-1.0, 4.0, 0.02).expect("static grid")));
    out.push(multivariate::exp_spline_continuity_check(c(2.5, 1.0), &[0.5, 1.0, 2.0]));
    out.push(multivariate::exp_spline_continuity_check(c(2.0, 0.0), &[0.5, 1.0, 2.0]));
    out.push(exp_spline_support_report());
    out
}

fn exp_spline_support_report() -> VerificationReport {
    let grid = Grid::span(-2.0, 4.0, 0.01).expect("static grid");
    let rb = VerificationReport::builder("multivariate.exp_spline_support")
        .param("a", 1.0)
        .complex("z", c(2.0, 0.0));
    match multivariate::exp_spline_support(1.0, c(2.0, 0.0), &grid) {
        Ok((outside, min, imag)) => rb
            .param("min_value", min)
            .param("imaginary_residue", imag)
            .finish_worst(vec![
                Comparison::new("mass outside [0, 2]", outside, 1e-3, None),
                Comparison::new("negative part", (-min).max(0.0), 1e-3, None),
                Comparison::new("imaginary residue", imag, 1e-6, None),
            ]),
        Err(e) => rb.failed(&e),
    }
}
