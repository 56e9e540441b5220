use fracspline::bspline::{eval_freq, ComplexBSpline};
use fracspline::multivariate::*;
use fracspline::numerics::Grid;
use fracspline::{Error, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn spectrum_reference_value() {
    let ray = EquidistantRay::new(vec![1.0, 0.0], c(2.5, 0.0)).unwrap();
    let v = mv_freq(&ray, &[1.0, 1.0]).unwrap();
    assert!((v - c(0.11935625352760296578, -0.35921096100255746419)).norm() < 1e-14, "{v}");
    assert_eq!(mv_freq(&ray, &[0.0, 0.0]).unwrap(), c(1.0, 0.0));
    assert!(matches!(mv_freq(&ray, &[1.0]), Err(Error::InvalidDirection(_))));
}

#[test]
fn exponential_spline_reference_values() {
    let v = exp_spline_freq(0.5, c(2.5, 1.0), 2.0).unwrap();
    assert!((v - c(-0.80221275065853373235, -0.39178680282263195436)).norm() < 1e-14, "{v}");
    let v = exp_spline_freq(1.0, c(1.0, 0.0), 0.0).unwrap();
    assert!((v.re - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    assert_eq!(exp_spline_freq(0.0, c(2.5, 1.0), 3.0).unwrap(), eval_freq(c(2.5, 1.0), 3.0));
    assert!(matches!(exp_spline_freq(-0.1, c(2.5, 0.0), 1.0), Err(Error::NegativeA(_))));
    // both sides of the Taylor branch against the series of (1 - e^{-a})/a
    for a in [0.99e-4, 1.01e-4] {
        let z = c(2.5, 0.3);
        let base: f64 = 1.0 - a / 2.0 + a * a / 6.0 - a * a * a / 24.0;
        let v = exp_spline_freq(a, z, 0.0).unwrap();
        assert!((v - c(base, 0.0).powc(z)).norm() < 1e-14, "{:e}", (v - c(base, 0.0).powc(z)).norm());
    }
}

#[test]
fn invalid_rays() {
    assert!(matches!(EquidistantRay::new(vec![0.0, 0.0], c(2.5, 0.0)), Err(Error::InvalidDirection(_))));
    assert!(EquidistantRay::new(vec![], c(2.5, 0.0)).is_err());
    assert!(EquidistantRay::new(vec![1.0, 0.0], c(0.5, 0.0)).is_err());
    assert!(Direction::new(&[0.0, 0.0]).is_err());
}

#[test]
fn prefactor_poles() {
    // (s - z)/2 = 0 at z = s
    assert!(matches!(series_prefactor(c(2.0, 0.0), 2), Err(Error::Pole(_))));
    assert!(matches!(series_prefactor(c(4.1, 0.0), 2), Err(Error::Pole(_))));
    assert!(series_prefactor(c(2.5, 0.5), 2).is_ok());
}

#[test]
fn lattice_point_singularity() {
    let ray = EquidistantRay::new(vec![1.0, 1.0], c(1.5, 0.3)).unwrap();
    assert!(matches!(mv_time(&ray, &[2.0, 2.0], 256), Err(Error::LatticePointSingularity(2))));
    assert!(mv_time(&ray, &[2.0, 2.1], 256).is_ok());
}

#[test]
fn univariate_spectrum_on_the_positive_axis() {
    // for s = 1 the spacing is sign(ω) d, so only ω > 0 sees the B-spline
    for z in [c(2.5, 0.0), c(2.5, 0.7), c(3.3, -0.4)] {
        let ray = EquidistantRay::new(vec![1.0], z).unwrap();
        for w in [0.3, 2.0, 11.0] {
            let v = mv_freq(&ray, &[w]).unwrap();
            assert!((v - eval_freq(z, w)).norm() < 1e-14);
        }
        let back = mv_freq(&ray, &[-2.0]).unwrap();
        assert!((back - eval_freq(z, -2.0)).norm() > 1e-3);
    }
}

#[test]
fn zeros_and_projection_law() {
    let ray = EquidistantRay::new(vec![1.0, 0.5], c(3.0, 0.0)).unwrap();
    let l = Direction::new(&[0.6, 0.8]).unwrap();
    assert!((ray.spacing(&l) - 1.0).abs() < 1e-15);
    let r = mv_zero_check(&ray, &l, &[1, 2, -3]);
    assert!(r.passed, "{r:?}");
}

#[test]
fn projected_spline_scaling() {
    let z = c(2.5, 0.5);
    let b = ComplexBSpline::new(z).unwrap();
    assert!((projected_spline(z, 1.0, 1.3).unwrap() - b.eval(1.3)).norm() < 1e-15);
    let v = projected_spline(z, 2.0, 2.6).unwrap();
    assert!((v - b.eval(1.3) * c(2.0, 0.0).powc(z - 1.0)).norm() < 1e-13);
    assert!(projected_spline(z, -1.0, 1.0).is_err());
}

#[test]
fn exponential_spline_reduces_to_the_b_spline() {
    let grid = Grid::span(-1.0, 6.0, 0.25).unwrap();
    let r = exp_spline_reduction_check(c(2.5, 0.5), &grid);
    assert!(r.passed, "{r:?}");
    let (outside, _, _) = exp_spline_support(1.0, c(3.0, 0.0), &Grid::span(-4.0, 8.0, 0.05).unwrap()).unwrap();
    assert!(outside < 1e-6);
}

fn unit_direction() -> impl Strategy<Value = Direction> {
    (0.0f64..std::f64::consts::TAU).prop_map(|a| Direction::new(&[a.cos(), a.sin()]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn restriction_to_a_line_is_univariate(
        re in 1.1f64..5.0, im in -1.5f64..1.5,
        d0 in -2.0f64..2.0, d1 in -2.0f64..2.0,
        l in unit_direction(), w in 0.01f64..20.0,
    ) {
        prop_assume!(d0.hypot(d1) > 0.1);
        let ray = EquidistantRay::new(vec![d0, d1], c(re, im)).unwrap();
        let cc = ray.spacing(&l);
        prop_assume!(cc.abs() > 1e-3);
        let lam = l.as_slice();
        let v = mv_freq(&ray, &[w * lam[0], w * lam[1]]).unwrap();
        let z = c(re, im);
        let base = (1.0 - c(0.0, -cc * w).exp()) / c(0.0, w);
        let u = (z * base.ln()).exp();
        prop_assert!((v - u).norm() <= 1e-10 * u.norm());
        if cc > 0.0 {
            let p = eval_freq(z, cc * w) * C64::new(cc, 0.0).powc(z);
            prop_assert!((v - p).norm() <= 1e-10 * u.norm());
        }
    }

    #[test]
    fn conjugate_order_conjugates_the_series(re in 2.55f64..3.45, im in -1.0f64..1.0, x0 in 0.3f64..3.0, x1 in 0.1f64..1.0) {
        let a = EquidistantRay::new(vec![1.0, 0.0], c(re, im)).unwrap();
        let b = EquidistantRay::new(vec![1.0, 0.0], c(re, -im)).unwrap();
        let va = mv_time(&a, &[x0, x1], 256).unwrap();
        let vb = mv_time(&b, &[x0, x1], 256).unwrap();
        // i^z is not conjugation-symmetric, so compare after removing it
        let pa = series_prefactor(c(re, im), 2).unwrap();
        let pb = series_prefactor(c(re, -im), 2).unwrap();
        prop_assert!(((va / pa).conj() - vb / pb).norm() <= 1e-10 * (vb / pb).norm().max(1.0));
    }
}
