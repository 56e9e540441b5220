use fracspline::dirichlet::*;
use fracspline::numerics::{seeded_rng, McConfig};
use fracspline::{Error, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn exp_first(x: &[f64]) -> C64 {
    c(x[0].exp(), 0.0)
}

#[test]
fn exponential_average_reference() {
    let b = WeightVector::positive(&[2.0, 1.0, 1.0]).unwrap();
    let tau = KnotVector::scalar(&[0.0, 1.0, 3.0]).unwrap();
    let q = average_quadrature(&exp_first, &b, &tau).unwrap();
    assert!((q - 3.2070001556854202076).norm() < 1e-9, "{q}");
    let m = average_mc(&exp_first, &b, &tau, McConfig::new(200_000, 11, 0)).unwrap();
    assert!((m.estimate - q).norm() < 4.0 * m.stderr, "{m:?}");
}

#[test]
fn complex_weights_average_linear_functions_exactly() {
    let b = WeightVector::complex(&[c(1.0, 0.5), c(2.0, -1.0), c(0.5, 0.0)]).unwrap();
    let tau = KnotVector::scalar(&[0.0, 1.0, 4.0]).unwrap();
    let q = average_quadrature(&|x: &[f64]| c(x[0], 0.0), &b, &tau).unwrap();
    let e = b.entries();
    let exact = (e[1] * 1.0 + e[2] * 4.0) / b.total();
    assert!((q - exact).norm() < 1e-10, "{q} vs {exact}");
}

#[test]
fn complex_weights_cannot_be_sampled() {
    let b = WeightVector::complex(&[c(1.0, 0.5), c(2.0, 0.0)]).unwrap();
    assert!(DirichletSampler::new(&b).is_err());
}

#[test]
fn invalid_inputs() {
    assert!(matches!(WeightVector::positive(&[1.0, 0.0]), Err(Error::InvalidWeights(_))));
    assert!(WeightVector::positive(&[]).is_err());
    assert!(WeightVector::complex(&[c(-1.0, 1.0)]).is_err());
    assert!(matches!(KnotVector::scalar(&[]), Err(Error::InvalidKnots(_))));
    assert!(KnotVector::vectors(vec![vec![0.0, 1.0], vec![2.0]]).is_err());
    assert!(KnotVector::scalar(&[0.0, f64::NAN]).is_err());
    let b = WeightVector::ones(3);
    let tau = KnotVector::scalar(&[0.0, 1.0]).unwrap();
    assert!(average_quadrature(&exp_first, &b, &tau).is_err());
    let b = WeightVector::ones(6);
    let tau = KnotVector::lattice(5);
    assert!(matches!(average_quadrature(&exp_first, &b, &tau), Err(Error::DimensionTooHigh(5))));
}

#[test]
fn sampling_is_deterministic() {
    let b = WeightVector::positive(&[1.5, 1.0, 1.5]).unwrap();
    let tau = KnotVector::scalar(&[0.0, 1.0, 2.0]).unwrap();
    let cfg = McConfig::new(5000, 3, 9);
    assert_eq!(sample_points(&b, &tau, cfg).unwrap(), sample_points(&b, &tau, cfg).unwrap());
    assert_ne!(sample_points(&b, &tau, cfg).unwrap(), sample_points(&b, &tau, cfg.with_stream(10)).unwrap());
}

#[test]
fn moment_and_shift_reports() {
    let cfg = McConfig::new(100_000, 7, 5);
    let b = WeightVector::positive(&[0.5, 1.5, 2.0]).unwrap();
    for j in 0..3 {
        let r = moment_identity_check(&b, j, cfg);
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn vector_knots() {
    let b = WeightVector::positive(&[1.0, 2.0, 1.0]).unwrap();
    let tau = KnotVector::vectors(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
    assert_eq!(tau.dim(), 2);
    // E[x] = (Σ b_j τ^j) / |b|
    let q = average_quadrature(&|x: &[f64]| c(x[0], x[1]), &b, &tau).unwrap();
    assert!((q - c(0.5, 0.5)).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_lie_on_the_simplex(w in proptest::collection::vec(0.05f64..5.0, 1..7), seed in 0u64..1000) {
        let b = WeightVector::positive(&w).unwrap();
        let mut rng = seeded_rng(seed, 0);
        for _ in 0..20 {
            let s = sample_dirichlet(&b, &mut rng).unwrap();
            prop_assert_eq!(s.u.len(), w.len());
            prop_assert!(s.u.iter().all(|x| *x >= 0.0));
            prop_assert!((s.u.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_functions_average_to_themselves(w in proptest::collection::vec(0.2f64..4.0, 2..4), k in -3.0f64..3.0) {
        let b = WeightVector::positive(&w).unwrap();
        let t: Vec<f64> = (0..w.len()).map(|j| j as f64 * 0.7).collect();
        let tau = KnotVector::scalar(&t).unwrap();
        let q = average_quadrature(&|_: &[f64]| c(k, 0.0), &b, &tau).unwrap();
        prop_assert!((q - k).norm() < 1e-9);
    }

    #[test]
    fn mean_is_weighted_knot_average(w in proptest::collection::vec(0.2f64..4.0, 2..4)) {
        let b = WeightVector::positive(&w).unwrap();
        let t: Vec<f64> = (0..w.len()).map(|j| (j * j) as f64).collect();
        let tau = KnotVector::scalar(&t).unwrap();
        let q = average_quadrature(&|x: &[f64]| c(x[0], 0.0), &b, &tau).unwrap();
        let exact: f64 = w.iter().zip(&t).map(|(b, t)| b * t).sum::<f64>() / w.iter().sum::<f64>();
        prop_assert!((q - exact).norm() < 1e-9 * exact.max(1.0));
    }
}
