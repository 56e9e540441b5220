use fracspline::fractional::*;
use fracspline::numerics::{ExpPoly, FracOrder, TestFunction};
use fracspline::{Error, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn order(z: C64) -> FracOrder {
    FracOrder::new(z).unwrap()
}

// For f(x) = x² e^{-x} the right-sided integral is e^{-x} (x² + 2zx + z(z+1)).
fn closed_integral(z: C64, x: f64) -> C64 {
    (-x).exp() * (x * x + 2.0 * z * x + z * (z + 1.0))
}

#[test]
fn integral_closed_form() {
    let f = ExpPoly::power_exp(2);
    for z in [c(0.5, 0.0), c(0.5, 0.5), c(1.7, -0.3), c(3.0, 0.0)] {
        for x in [0.0, 0.5, 2.0, 5.0] {
            let v = frac_integral(&f, &order(z), x, DEFAULT_WINDOW).unwrap();
            assert!((v - closed_integral(z, x)).norm() < 1e-10, "z={z} x={x}: {v}");
        }
    }
}

#[test]
fn signed_derivative_is_the_analytic_continuation() {
    let f = ExpPoly::power_exp(2);
    for z in [c(0.5, 0.0), c(0.5, 0.5), c(1.3, 0.2), c(2.0, 0.0)] {
        for x in [0.5, 1.0, 3.0] {
            let v = weyl_derivative(&f, &order(z), x, DEFAULT_WINDOW).unwrap();
            let exact = closed_integral(-z, x);
            assert!((v - exact).norm() < 1e-8, "z={z} x={x}: {v} vs {exact}");
        }
    }
}

#[test]
fn integer_order_derivative_is_classical() {
    let f = ExpPoly::gaussian(1.0, 1.0);
    for m in 1..=3u32 {
        let z = order(c(m as f64, 0.0));
        let v = frac_derivative(&f, &z, 0.3, DEFAULT_WINDOW).unwrap();
        assert!((v - f.derivative(m, 0.3).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn orders_must_have_positive_real_part() {
    assert!(matches!(FracOrder::new(c(0.0, 1.0)), Err(Error::InvalidOrder { .. })));
    assert!(FracOrder::new(c(-0.5, 0.0)).is_err());
}

#[test]
fn operator_laws() {
    let f = ExpPoly::power_exp(2);
    assert!(semigroup_check(&f, &order(c(0.3, 0.2)), &order(c(0.7, -0.2)), &[0.5, 1.0]).passed);
    let r = inverse_check(&f, &order(c(1.4, 0.3)), &[0.5, 2.0]);
    assert!(r.passed, "{r:?}");
    assert!(kernel_semigroup_check(c(0.4, 0.1), c(0.9, -0.6), &[0.3, 1.0, 4.0]).passed);
    assert!(delta_pair_check(c(2.5, 0.0), 1, &ExpPoly::gaussian(1.0, 1.0)).passed);
}

#[test]
fn unsigned_composition_is_reported() {
    let f = ExpPoly::power_exp(2);
    let r = inverse_check(&f, &order(c(0.5, 0.5)), &[1.0]);
    assert!(r.passed);
    let unsigned = r.parameters["unsigned_discrepancy"].as_f64().unwrap();
    assert!(unsigned > 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exponential_is_a_fixed_point(re in 0.1f64..3.0, im in -1.5f64..1.5, x in 0.0f64..4.0) {
        let f = ExpPoly::exp_decay();
        let v = frac_integral(&f, &order(c(re, im)), x, DEFAULT_WINDOW).unwrap();
        prop_assert!((v - (-x).exp()).norm() < 1e-9);
    }

    #[test]
    fn linearity(re in 0.1f64..2.0, im in -1.0f64..1.0, a in -2.0f64..2.0, x in 0.0f64..3.0) {
        let z = order(c(re, im));
        let f = ExpPoly::gaussian(1.0, 1.0);
        let g = ExpPoly::power_exp(1);
        let h = ExpPoly::gaussian(1.0, 1.0).scaled(c(a, 0.0));
        let fx = frac_integral(&f, &z, x, DEFAULT_WINDOW).unwrap();
        let gx = frac_integral(&g, &z, x, DEFAULT_WINDOW).unwrap();
        let hx = frac_integral(&h, &z, x, DEFAULT_WINDOW).unwrap();
        prop_assert!((hx - a * fx).norm() < 1e-10);
        let sum = fracspline::numerics::testfn::Combination { terms: vec![(c(1.0, 0.0), &f as &dyn TestFunction), (c(a, 0.0), &g)] };
        let sx = frac_integral(&sum, &z, x, DEFAULT_WINDOW).unwrap();
        prop_assert!((sx - fx - a * gx).norm() < 1e-10);
    }
}
