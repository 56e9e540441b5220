//! Fractional integrals and derivatives of complex order.
//!
//! The operators are right-sided:
//!
//! * `D^{-z} f(x) = Γ(z)^{-1} ∫_0^∞ t^{z-1} f(x + t) dt`,
//! * `D^z f(x) = Γ(ν)^{-1} ∫_0^∞ t^{ν-1} f^{(m)}(x + t) dt`, `ν = m - z`.
//!
//! With this orientation `D^z D^{-z} = (-1)^m`, so the left inverse of
//! `D^{-z}` is [`weyl_derivative`], which carries the extra sign `(-1)^m`.
//! Both are provided; the identity checks use the signed form and report the
//! unsigned outcome alongside.

use rayon::prelude::*;

use crate::numerics::gamma::{kernel_k, rgamma};
use crate::numerics::quadrature::{integrate_singular, QuadOptions};
use crate::numerics::testfn::Derived;
use crate::numerics::{FracOrder, Grid, SampledFunction, TestFunction};
use crate::report::VerificationReport;
use crate::{Error, Result, C64};

/// Default integration window.
pub const DEFAULT_WINDOW: f64 = 40.0;
/// Step of the intermediate grids used by iterated checks.
pub const TABLE_STEP: f64 = 1.0 / 256.0;

const TAIL_RATIO: f64 = 1e-12;
const MAX_DOUBLINGS: u32 = 4;

fn tail_ok<F: Fn(f64) -> C64>(f: &F, order: C64, x: f64, window: f64) -> bool {
    let head = (0..=32)
        .map(|i| f(x + window * i as f64 / 64.0).norm())
        .fold(0.0, f64::max);
    let tail = f(x + window).norm().max(f(x + 2.0 * window).norm())
        * window.max(1.0).powf(order.re)
        * rgamma(order).norm();
    tail <= TAIL_RATIO * head || tail < 1e-300
}

/// `Γ(order)^{-1} ∫_0^window t^{order-1} f(x + t) dt`, no tail handling.
pub fn right_integral<F: Fn(f64) -> C64>(f: F, order: C64, x: f64, window: f64) -> Result<C64> {
    let v = integrate_singular(|t| f(x + t), 0.0, window, order - 1.0, QuadOptions::default())?;
    Ok(v * rgamma(order))
}

/// [`right_integral`] with the tail check and window doubling.
pub fn right_integral_auto<F: Fn(f64) -> C64>(f: F, order: C64, x: f64, window: f64) -> Result<C64> {
    let mut w = window;
    for _ in 0..=MAX_DOUBLINGS {
        if tail_ok(&f, order, x, w) {
            return right_integral(&f, order, x, w);
        }
        w *= 2.0;
    }
    Err(Error::TailNotNegligible { window: w / 2.0 })
}

/// Fractional integral `D^{-z} f(x)`.
pub fn frac_integral(f: &dyn TestFunction, z: &FracOrder, x: f64, window: f64) -> Result<C64> {
    right_integral_auto(|s| f.eval(s), z.z, x, window)
}

/// Fractional derivative `D^z f(x)` in the derivative-inside form.
pub fn frac_derivative(f: &dyn TestFunction, z: &FracOrder, x: f64, window: f64) -> Result<C64> {
    let m = z.m;
    let at_x = f.derivative(m, x).ok_or(Error::MissingDerivative(m))?;
    if z.is_integer() {
        return Ok(at_x);
    }
    right_integral_auto(|s| f.derivative(m, s).unwrap(), z.nu, x, window)
}

/// `(-1)^m D^z f(x)`: the left inverse of [`frac_integral`].
pub fn weyl_derivative(f: &dyn TestFunction, z: &FracOrder, x: f64, window: f64) -> Result<C64> {
    let v = frac_derivative(f, z, x, window)?;
    Ok(if z.m % 2 == 1 { -v } else { v })
}

/// Tabulates `g` on `[a, b]` with the given step, in parallel.
pub fn tabulate<G>(g: G, a: f64, b: f64, step: f64) -> Result<SampledFunction>
where
    G: Fn(f64) -> Result<C64> + Sync,
{
    let grid = Grid::span(a, b, step)?;
    let vals: Result<Vec<C64>> = (0..grid.count())
        .into_par_iter()
        .map(|i| g(grid.point(i)))
        .collect();
    SampledFunction::new(grid, vals?)
}

fn bounds(points: &[f64]) -> (f64, f64) {
    let lo = points.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `D^{-(z1+z2)} f` against `D^{-z1}(D^{-z2} f)`, the inner result tabulated
/// and interpolated.
pub fn semigroup_check(f: &dyn TestFunction, z1: &FracOrder, z2: &FracOrder, points: &[f64]) -> VerificationReport {
    let b = VerificationReport::builder("fractional.semigroup")
        .complex("z1", z1.z)
        .complex("z2", z2.z)
        .param("function", f.describe())
        .param("points", points.to_vec());
    let run = || -> Result<f64> {
        let w = DEFAULT_WINDOW;
        let (lo, hi) = bounds(points);
        let inner = tabulate(
            |s| frac_integral(f, z2, s, w),
            lo,
            hi + w + 4.0 * TABLE_STEP,
            TABLE_STEP,
        )?;
        let sum = FracOrder::new(z1.z + z2.z)?;
        let mut worst = 0.0f64;
        for &x in points {
            let iterated = right_integral(|s| inner.interp(s), z1.z, x, w)?;
            let direct = frac_integral(f, &sum, x, w)?;
            worst = worst.max((iterated - direct).norm());
        }
        Ok(worst)
    };
    match run() {
        Ok(d) => b.note("inner integral on a 1/256 grid, cubic interpolation").finish(d, 1e-6, None),
        Err(e) => b.failed(&e),
    }
}

/// `D^z D^{-z} f = f` with the signed derivative; the unsigned composition
/// is reported as `unsigned_discrepancy`.
pub fn inverse_check(f: &dyn TestFunction, z: &FracOrder, points: &[f64]) -> VerificationReport {
    let b = VerificationReport::builder("fractional.inverse")
        .complex("z", z.z)
        .param("m", z.m)
        .param("function", f.describe())
        .param("points", points.to_vec());
    let run = || -> Result<(f64, f64)> {
        let w = DEFAULT_WINDOW;
        let fm = Derived { inner: f, order: z.m };
        let sign = if z.m % 2 == 1 { -1.0 } else { 1.0 };
        let mut values = Vec::with_capacity(points.len());
        if z.is_integer() {
            for &x in points {
                values.push(frac_integral(&fm, z, x, w)?);
            }
        } else {
            // derivatives commute with D^{-z}: tabulate D^{-z} f^{(m)}
            let (lo, hi) = bounds(points);
            let inner = tabulate(
                |s| frac_integral(&fm, z, s, w),
                lo,
                hi + w + 4.0 * TABLE_STEP,
                TABLE_STEP,
            )?;
            for &x in points {
                values.push(right_integral(|s| inner.interp(s), z.nu, x, w)?);
            }
        }
        let mut signed = 0.0f64;
        let mut unsigned = 0.0f64;
        for (&x, v) in points.iter().zip(values) {
            let fx = f.eval(x);
            signed = signed.max((sign * v - fx).norm());
            unsigned = unsigned.max((v - fx).norm());
        }
        Ok((signed, unsigned))
    };
    match run() {
        Ok((d, u)) => b
            .param("unsigned_discrepancy", u)
            .note("outer operator uses the (-1)^m sign; unsigned_discrepancy is the composition without it")
            .finish(d, 1e-5, None),
        Err(e) => b.failed(&e),
    }
}

/// Weak form of `D^z K_z(· - k) = δ_k`:
/// `∫ K_z(x - k) (D^z φ)(x) dx = φ(k)` with the signed derivative.
pub fn delta_pair_check(z: C64, k: u32, phi: &dyn TestFunction) -> VerificationReport {
    let b = VerificationReport::builder("fractional.delta_pair")
        .complex("z", z)
        .param("k", k)
        .param("function", phi.describe());
    let run = || -> Result<(f64, f64)> {
        if z.re <= 1.0 {
            return Err(Error::InvalidOrder {
                value: z,
                reason: "delta pair needs Re z > 1",
            });
        }
        let fo = FracOrder::new(z)?;
        let w = DEFAULT_WINDOW;
        let kf = k as f64;
        let err = std::sync::Mutex::new(None);
        let integrand = |s: f64| match weyl_derivative(phi, &fo, kf + s, w) {
            Ok(v) => v,
            Err(e) => {
                *err.lock().unwrap() = Some(e);
                C64::new(0.0, 0.0)
            }
        };
        let v = integrate_singular(integrand, 0.0, w, z - 1.0, QuadOptions::default())? * rgamma(z);
        if let Some(e) = err.into_inner().unwrap() {
            return Err(e);
        }
        let target = phi.eval(kf);
        let sign = if fo.m % 2 == 1 { -1.0 } else { 1.0 };
        Ok(((v - target).norm(), (sign * v - target).norm()))
    };
    match run() {
        Ok((d, u)) => b
            .param("unsigned_discrepancy", u)
            .finish(d, 1e-5, None),
        Err(e) => b.failed(&e),
    }
}

/// `(K_{z1} * K_{z2})(x) = K_{z1+z2}(x)`, the convolution split at `x/2`.
pub fn kernel_semigroup_check(z1: C64, z2: C64, points: &[f64]) -> VerificationReport {
    let b = VerificationReport::builder("fractional.kernel_semigroup")
        .complex("z1", z1)
        .complex("z2", z2)
        .param("points", points.to_vec());
    let run = || -> Result<f64> {
        let o = QuadOptions::with_tol(1e-12, 1e-15);
        let mut worst = 0.0f64;
        for &x in points {
            let half = 0.5 * x;
            let left = integrate_singular(
                |t| kernel_k(z2, x - t).unwrap_or_default(),
                0.0,
                half,
                z1 - 1.0,
                o,
            )? * rgamma(z1);
            let right = integrate_singular(
                |s| kernel_k(z1, x - s).unwrap_or_default(),
                0.0,
                half,
                z2 - 1.0,
                o,
            )? * rgamma(z2);
            let exact = kernel_k(z1 + z2, x)?;
            worst = worst.max((left + right - exact).norm() / exact.norm().max(1.0));
        }
        Ok(worst)
    };
    match run() {
        Ok(d) => b.finish(d, 1e-8, None),
        Err(e) => b.failed(&e),
    }
}
