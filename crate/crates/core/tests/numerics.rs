use fracspline::numerics::gamma::rgamma_pair;
use fracspline::numerics::rng::{mc_collect, mc_means};
use fracspline::numerics::*;
use fracspline::{Error, C64};
use proptest::prelude::*;
use rand::Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

// 40-digit reference values.
const GAMMA_TABLE: [((f64, f64), (f64, f64)); 7] = [
    ((2.5, 1.0), (0.77476210455108367117, 0.70763120437959258559)),
    ((0.3, -0.7), (0.30968625674374915557, 0.85678775293927057254)),
    ((-3.6, 2.2), (-0.00079552242105211648413, 0.00020299758479740485222)),
    ((12.25, -8.5), (-3931059.2565689863086, -1659091.571584123442)),
    ((-0.5, 0.0), (-3.5449077018110320546, 0.0)),
    ((30.0, 20.0), (1.5609654275290077167e28, -1.0795336401868512377e27)),
    ((-17.3, 0.4), (-2.7796646701945446849e-16, 2.0577177520800763068e-15)),
];

#[test]
fn gamma_reference_values() {
    for ((a, b), (re, im)) in GAMMA_TABLE {
        let g = gamma(c(a, b)).unwrap();
        assert!(rel(g, c(re, im)) < 1e-13, "gamma({a}{b:+}i) = {g}");
    }
}

#[test]
fn gamma_integers_and_poles() {
    let mut f = 1.0;
    for n in 1..=20 {
        assert!(rel(gamma(c(n as f64, 0.0)).unwrap(), c(f, 0.0)) < 1e-14);
        f *= n as f64;
    }
    for n in [0.0, -1.0, -7.0] {
        assert!(matches!(gamma(c(n, 0.0)), Err(Error::Pole(_))));
        assert_eq!(rgamma(c(n, 0.0)), c(0.0, 0.0));
    }
    assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(std::f64::consts::PI.sqrt(), 0.0)) < 1e-15);
}

#[test]
fn binomials() {
    let b = binom(c(2.5, 1.0), 3);
    assert!((b - c(-0.4375, 0.7916666666666667)).norm() < 1e-15);
    let b = binom(c(2.5, 1.0), 7);
    assert!(rel(b, c(0.020453559027777778, -0.0058438740079365079)) < 1e-14);
    assert_eq!(binom(c(4.0, 0.0), 6), c(0.0, 0.0));
    assert_eq!(binom(c(4.0, 0.0), 2), c(6.0, 0.0));
    // the log path for large k agrees with the product path
    let z = c(2.3, 0.4);
    let prod = binom(z, 250);
    let pair = rgamma_pair(z, 250) * gamma(z + 1.0).unwrap();
    assert!(rel(pair, prod) < 1e-9);
}

#[test]
fn kernel_and_truncated_power() {
    assert!(matches!(kernel_k(c(0.0, 1.0), 1.0), Err(Error::InvalidOrder { .. })));
    assert_eq!(kernel_k(c(1.5, 0.0), -1.0).unwrap(), c(0.0, 0.0));
    let k = kernel_k(c(2.0, 0.0), 3.0).unwrap();
    assert!((k - 3.0).norm() < 1e-14);
    assert_eq!(trunc_pow(-0.5, c(1.5, 0.0)).unwrap(), c(0.0, 0.0));
    assert!(trunc_pow(0.0, c(-0.5, 0.0)).is_err());
}

#[test]
fn singular_quadrature_reference() {
    let v = integrate_singular(|t| c((-t).exp(), 0.0), 0.0, 1.0, c(-0.5, 0.0), QuadOptions::default()).unwrap();
    assert!((v - 1.4936482656248540508).norm() < 1e-12);
    // Beta(a, b) = ∫ t^{a-1} (1-t)^{b-1}
    let (a, b) = (c(0.3, 0.8), c(2.0, 0.0));
    let v = integrate_singular(|t| c(1.0 - t, 0.0), 0.0, 1.0, a - 1.0, QuadOptions::default()).unwrap();
    let beta = gamma(a).unwrap() * gamma(b).unwrap() / gamma(a + b).unwrap();
    assert!(rel(v, beta) < 1e-10);
    assert!(matches!(
        integrate_singular(|_| c(1.0, 0.0), 1.0, 0.0, c(0.0, 0.0), QuadOptions::default()),
        Err(Error::InvalidGrid(_))
    ));
}

#[test]
fn adaptive_quadrature_with_breakpoints() {
    let v = integrate(|t| c(t.abs(), 0.0), &[-1.0, 0.0, 2.0], QuadOptions::default()).unwrap();
    assert!((v - 2.5).norm() < 1e-13);
    let v = integrate(|t| C64::from_polar(1.0, 10.0 * t), &[0.0, 1.0], QuadOptions::default()).unwrap();
    let exact = (C64::from_polar(1.0, 10.0) - 1.0) / c(0.0, 10.0);
    assert!((v - exact).norm() < 1e-12);
}

#[test]
fn grids_parse_and_validate() {
    let g: Grid = "0:4:0.5".parse().unwrap();
    assert_eq!(g.count(), 9);
    assert_eq!(g.point(2), 1.0);
    assert!("0:4".parse::<Grid>().is_err());
    assert!("0:4:-1".parse::<Grid>().is_err());
    assert!("a:4:1".parse::<Grid>().is_err());
    let f = SampledFunction::from_fn(Grid::span(0.0, 2.0, 0.01).unwrap(), |x| c(x * x * x, 0.0));
    assert!((f.interp(1.234) - 1.234f64.powi(3)).norm() < 1e-12);
    assert_eq!(f.interp(-1.0), c(0.0, 0.0));
}

#[test]
fn monte_carlo_is_deterministic_and_chunk_stable() {
    let cfg = McConfig::new(10_000, 11, 3);
    let draw = |r: &mut rand_chacha::ChaCha8Rng, out: &mut [C64]| out[0] = c(r.random::<f64>(), 0.0);
    let a = mc_means(cfg, 1, draw);
    let b = mc_means(cfg, 1, draw);
    assert_eq!(a, b);
    assert!((a[0].estimate.re - 0.5).abs() < 4.0 * a[0].stderr);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c1 = single.install(|| mc_means(cfg, 1, draw));
    assert_eq!(a, c1);
    let xs: Vec<f64> = mc_collect(cfg, |r| r.random::<f64>());
    let ys: Vec<f64> = single.install(|| mc_collect(cfg, |r| r.random::<f64>()));
    assert_eq!(xs, ys);
    assert_ne!(mc_means(cfg.with_stream(4), 1, draw), a);
}

#[test]
fn constant_integrand_has_zero_variance() {
    let e = mc_means(McConfig::new(5000, 1, 0), 1, |_, out| out[0] = c(2.0, -1.0));
    assert_eq!(e[0].estimate, c(2.0, -1.0));
    assert_eq!(e[0].stderr, 0.0);
}

#[test]
fn orders() {
    assert!(ComplexOrder::spline(c(1.0, 3.0)).is_err());
    assert!(ComplexOrder::fractional(c(0.0, 1.0)).is_err());
    let f = FracOrder::new(c(2.0, 0.5)).unwrap();
    assert_eq!(f.m, 3);
    let f = FracOrder::new(c(2.0, 0.0)).unwrap();
    assert!(f.is_integer() && f.m == 2);
    let f = FracOrder::new(c(0.3, -1.0)).unwrap();
    assert_eq!(f.m, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_recurrence(re in -8.0f64..15.0, im in -6.0f64..6.0) {
        let z = c(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3 || z.re > 0.5);
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn gamma_reflection(re in -5.0f64..5.0, im in -3.0f64..3.0) {
        let z = c(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-2);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = std::f64::consts::PI / (std::f64::consts::PI * z).sin();
        prop_assert!(rel(lhs, rhs) < 1e-11);
    }

    #[test]
    fn gamma_conjugation(re in 0.1f64..20.0, im in -10.0f64..10.0) {
        let z = c(re, im);
        prop_assert!(rel(gamma(z.conj()).unwrap(), gamma(z).unwrap().conj()) < 1e-14);
    }

    #[test]
    fn pascal_rule(re in -4.0f64..6.0, im in -3.0f64..3.0, k in 0usize..60) {
        let z = c(re, im);
        let lhs = binom(z + 1.0, k + 1);
        let rhs = binom(z, k) + binom(z, k + 1);
        prop_assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm().max(1.0));
    }

    #[test]
    fn beta_integral(a in 0.05f64..3.0, ai in -2.0f64..2.0, b in 1.0f64..3.0) {
        let wa = c(a - 1.0, ai);
        let v = integrate_singular(|t| c((1.0 - t).powf(b - 1.0), 0.0), 0.0, 1.0, wa, QuadOptions::default()).unwrap();
        let za = c(a, ai);
        let zb = c(b, 0.0);
        let beta = gamma(za).unwrap() * gamma(zb).unwrap() / gamma(za + zb).unwrap();
        prop_assert!(rel(v, beta) < 1e-8);
    }

    #[test]
    fn sin_pi_is_exact_at_integers(n in -1000i32..1000) {
        prop_assert_eq!(sin_pi(c(n as f64, 0.0)), c(0.0, 0.0));
    }
}
