use fracspline::bspline::*;
use fracspline::classical::cardinal;
use fracspline::numerics::Grid;
use fracspline::{Error, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

// Reference values from a 40-digit evaluation of the series.
const TIME_TABLE: [((f64, f64), f64, (f64, f64)); 7] = [
    ((2.5, 1.0), 0.7, (0.25475758946851622373, -0.49662263017899942452)),
    ((2.5, 1.0), 1.3, (1.2513916446431268313, -0.22788456844509967801)),
    ((2.5, 1.0), 3.9, (-0.021388355493889871598, -0.0059502441511318908583)),
    ((3.2, -0.7), 2.5, (0.14222480653356690878, -0.29166068032428894813)),
    ((2.5, 0.0), 1.25, (0.81622622436350156721, 0.0)),
    ((1.5, 0.5), 0.4, (0.70422938656072660704, -0.37817723869830293988)),
    ((4.0, 0.0), 2.2, (0.63066666666666660627, 0.0)),
];

#[test]
fn time_domain_reference_values() {
    for ((a, b), x, (re, im)) in TIME_TABLE {
        let s = ComplexBSpline::new(c(a, b)).unwrap();
        let v = s.eval_time(x);
        assert!(!v.accuracy_loss);
        assert!((v.value - c(re, im)).norm() < 1e-13, "B_{a}{b:+}i({x}) = {}", v.value);
        assert!((s.eval_time_alt(x).value - c(re, im)).norm() < 1e-12);
    }
}

#[test]
fn fourier_inversion_matches_series() {
    let s = ComplexBSpline::new(c(2.5, 1.0)).unwrap();
    for x in [0.7, 1.3, 3.9] {
        let d = (s.eval_time_fourier(x) - s.eval_time(x).value).norm();
        assert!(d < 1e-4, "x = {x}: {d}");
    }
}

#[test]
fn rejects_low_orders() {
    assert!(matches!(ComplexBSpline::new(c(1.0, 0.5)), Err(Error::InvalidOrder { .. })));
    assert!(ComplexBSpline::new(c(0.5, 0.0)).is_err());
}

#[test]
fn spectrum_values() {
    assert_eq!(eval_freq(c(2.5, 1.0), 0.0), c(1.0, 0.0));
    let w = 1e-7;
    let near = eval_freq(c(2.5, 1.0), w);
    assert!((near - 1.0).norm() < 1e-6);
    let v = eval_freq(c(2.0, 0.0), std::f64::consts::PI);
    assert!((v - c(-4.0 / (std::f64::consts::PI * std::f64::consts::PI), 0.0)).norm() < 1e-15);
    assert!(matches!(phase_factorization(c(2.0, 1.0), 2.0 * std::f64::consts::PI), Err(Error::LogSingularity(_))));
}

#[test]
fn integer_orders_are_classical() {
    for n in 2..=6 {
        let s = ComplexBSpline::new(c(n as f64, 0.0)).unwrap();
        for i in 0..=200 {
            let x = -1.0 + (n as f64 + 2.0) * i as f64 / 200.0;
            assert!((s.eval_time(x).value - cardinal(n, x)).norm() < 1e-11);
        }
        assert_eq!(s.eval_time(n as f64 + 0.5).value, c(0.0, 0.0));
    }
}

#[test]
fn convolution_of_conjugate_pair() {
    let grid = Grid::span(0.0, 8.0, 1.0 / 128.0).unwrap();
    let r = convolve_check(c(1.5, 0.5), c(1.5, -0.5), &grid);
    assert!(r.passed, "{r:?}");
    assert!(!convolve_check(c(2.0, 0.0), c(2.0, 0.0), &Grid::span(1.0, 2.0, 0.1).unwrap()).passed);
}

#[test]
fn decay_is_algebraic() {
    assert!(decay_check(c(2.5, 0.0), 3).passed);
    assert!(!decay_check(c(2.5, 0.0), 4).passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vanishes_left_of_origin(re in 1.1f64..6.0, im in -2.0f64..2.0, x in -10.0f64..0.0) {
        let s = ComplexBSpline::new(c(re, im)).unwrap();
        prop_assert_eq!(s.eval_time(x).value, c(0.0, 0.0));
    }

    #[test]
    fn conjugate_order_conjugates_values(re in 1.1f64..6.0, im in -2.0f64..2.0, x in 0.0f64..10.0) {
        let a = ComplexBSpline::new(c(re, im)).unwrap().eval_time(x).value;
        let b = ComplexBSpline::new(c(re, -im)).unwrap().eval_time(x).value;
        prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn series_forms_agree(re in 1.2f64..6.0, im in -1.5f64..1.5, x in 0.0f64..12.0) {
        let s = ComplexBSpline::new(c(re, im)).unwrap();
        let a = s.eval_time(x).value;
        let b = s.eval_time_alt(x).value;
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn recursion_relation(re in 2.1f64..6.0, im in -1.0f64..1.0, x in 0.0f64..8.0) {
        let z = c(re, im);
        let lhs = ComplexBSpline::new(z).unwrap().eval_time(x).value;
        prop_assert!((lhs - recursion_step(z, x).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn phase_factors_multiply_to_spectrum(re in 1.1f64..6.0, im in -2.0f64..2.0, w in 0.01f64..6.0) {
        let z = c(re, im);
        let p = phase_factorization(z, w).unwrap();
        let f = eval_freq(z, w);
        prop_assert!((p.product() - f).norm() <= 1e-12 * f.norm());
        prop_assert!((p.phase_part.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectrum_is_bounded_by_one(re in 1.1f64..6.0, w in -50.0f64..50.0) {
        prop_assert!(eval_freq(c(re, 0.0), w).norm() <= 1.0 + 1e-14);
    }

    #[test]
    fn integer_symbol_zeros(n in 2u32..7, k in 1i32..20) {
        let v = eval_freq(c(n as f64, 0.0), 2.0 * std::f64::consts::PI * k as f64);
        prop_assert!(v.norm() <= 1e-12);
    }
}
