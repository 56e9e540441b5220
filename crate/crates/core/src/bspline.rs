//! The cardinal complex B-spline `B_z`, `Re z > 1`.
//!
//! Time domain: `B_z(x) = Γ(z)^{-1} Σ_{k < x} (-1)^k C(z, k) (x - k)^{z-1}`.
//! Frequency domain: `B̂_z(ω) = Ω(ω)^z` with `Ω(ω) = (1 - e^{-iω}) / (iω)`,
//! for the transform `f̂(ω) = ∫ f(x) e^{-iωx} dx`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::numerics::gamma::{rgamma, rgamma_pair};
use crate::numerics::order::as_integer;
use crate::numerics::sum::KahanSum;
use crate::numerics::{ComplexOrder, Grid};
use crate::report::{Comparison, VerificationReport};
use crate::{Error, Result, C64};

const TAYLOR_CUTOFF: f64 = 1e-4;
const ACCURACY_LOSS_RATIO: f64 = 1e6;

/// A time-domain value with a flag for severe cancellation in the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeValue {
    pub value: C64,
    pub accuracy_loss: bool,
}

/// `Ω(ω) = (1 - e^{-iω}) / (iω)`, with `Ω(0) = 1`.
pub fn omega(w: f64) -> C64 {
    if w == 0.0 {
        return C64::new(1.0, 0.0);
    }
    if w.abs() < TAYLOR_CUTOFF {
        return omega_taylor(C64::new(0.0, -w));
    }
    let iw = C64::new(0.0, w);
    (1.0 - (-iw).exp()) / iw
}

/// `(1 - e^{-s}) / s = Σ_{n ≤ 6} (-s)^n / (n + 1)!` for small `|s|`.
pub(crate) fn omega_taylor(minus_s: C64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..=6 {
        term *= minus_s / (n as f64 + 1.0);
        sum += term;
    }
    sum
}

fn principal_pow(base: C64, z: C64) -> C64 {
    if base == C64::new(1.0, 0.0) {
        return base;
    }
    if base == C64::new(0.0, 0.0) {
        return base;
    }
    (z * base.ln()).exp()
}

/// `Ω(ω)^z` on the principal branch; exactly 1 at `ω = 0`.
pub fn eval_freq(z: C64, w: f64) -> C64 {
    principal_pow(omega(w), z)
}

/// `((1 - e^{-icϖ}) / (iϖ))^z = (c Ω(cϖ))^z`, the spectrum of the cardinal
/// spline with knot spacing `c`.
pub fn eval_freq_spaced(z: C64, c: f64, varpi: f64) -> C64 {
    principal_pow(c * omega(c * varpi), z)
}

/// Cardinal complex B-spline of order `z`, `Re z > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexBSpline {
    order: ComplexOrder,
}

impl ComplexBSpline {
    pub fn new(z: C64) -> Result<Self> {
        Ok(Self {
            order: ComplexOrder::spline(z)?,
        })
    }

    pub fn order(&self) -> C64 {
        self.order.value()
    }

    /// Finite alternating series with compensated summation.
    pub fn eval_time(&self, x: f64) -> TimeValue {
        let z = self.order();
        if !(x > 0.0) {
            return TimeValue {
                value: C64::new(0.0, 0.0),
                accuracy_loss: false,
            };
        }
        if let Some(n) = self.order.as_integer() {
            if x >= n as f64 {
                return TimeValue {
                    value: C64::new(0.0, 0.0),
                    accuracy_loss: false,
                };
            }
        }
        let mut acc = KahanSum::new();
        // a_k = (-1)^k C(z, k)
        let mut a = C64::new(1.0, 0.0);
        let mut k = 0usize;
        while (k as f64) < x {
            if k > 0 {
                a *= (k as f64 - 1.0 - z) / k as f64;
            }
            let t = x - k as f64;
            acc.add(a * ((z - 1.0) * t.ln()).exp());
            k += 1;
        }
        finish(acc, rgamma(z))
    }

    /// `z Σ (-1)^k (x-k)_+^{z-1} / (Γ(z-k+1) Γ(k+1))`, evaluated through the
    /// reciprocal gamma function rather than the binomial recurrence.
    pub fn eval_time_alt(&self, x: f64) -> TimeValue {
        let z = self.order();
        if !(x > 0.0) {
            return TimeValue {
                value: C64::new(0.0, 0.0),
                accuracy_loss: false,
            };
        }
        let mut acc = KahanSum::new();
        let mut k = 0usize;
        while (k as f64) < x {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let t = x - k as f64;
            acc.add(sign * rgamma_pair(z, k) * ((z - 1.0) * t.ln()).exp());
            k += 1;
        }
        finish(acc, z)
    }

    pub fn eval_freq(&self, w: f64) -> C64 {
        eval_freq(self.order(), w)
    }

    /// Numerical inverse Fourier transform of `Ω^z` (trapezoid rule over
    /// `periods` periods of `2π` on each side, `per_period` nodes each).
    pub fn eval_time_fourier_with(&self, x: f64, periods: usize, per_period: usize) -> C64 {
        let z = self.order();
        let dw = 2.0 * PI / per_period as f64;
        let n = (periods * per_period) as i64;
        let mut acc = KahanSum::new();
        for j in -n..=n {
            let w = j as f64 * dw;
            let f = eval_freq(z, w) * C64::new(0.0, w * x).exp();
            acc.add(if j.abs() == n { 0.5 * f } else { f });
        }
        acc.value() * dw / (2.0 * PI)
    }

    pub fn eval_time_fourier(&self, x: f64) -> C64 {
        self.eval_time_fourier_with(x, 1000, 256)
    }

    /// Series value, or the Fourier inversion when the series lost accuracy.
    pub fn eval(&self, x: f64) -> C64 {
        let t = self.eval_time(x);
        if t.accuracy_loss {
            self.eval_time_fourier(x)
        } else {
            t.value
        }
    }
}

fn finish(acc: KahanSum, factor: C64) -> TimeValue {
    let v = acc.value();
    TimeValue {
        value: v * factor,
        accuracy_loss: acc.abs_sum() > ACCURACY_LOSS_RATIO * v.norm(),
    }
}

/// The three factors of `B̂_z(ω) = B̂_{Re z}(ω) · e^{i Im z ln|Ω|} · e^{-Im z arg Ω}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseParts {
    pub modulus_part: C64,
    pub phase_part: C64,
    pub damping_part: C64,
}

impl PhaseParts {
    pub fn product(&self) -> C64 {
        self.modulus_part * self.phase_part * self.damping_part
    }
}

pub fn phase_factorization(z: C64, w: f64) -> Result<PhaseParts> {
    let k = (w / (2.0 * PI)).round();
    if k != 0.0 && (w - 2.0 * PI * k).abs() <= 1e-12 * w.abs() {
        return Err(Error::LogSingularity(w));
    }
    let om = omega(w);
    if om == C64::new(0.0, 0.0) {
        return Err(Error::LogSingularity(w));
    }
    let modulus_part = principal_pow(om, C64::new(z.re, 0.0));
    let phase_part = C64::new(0.0, z.im * om.norm().ln()).exp();
    let damping_part = C64::new((-z.im * om.arg()).exp(), 0.0);
    Ok(PhaseParts {
        modulus_part,
        phase_part,
        damping_part,
    })
}

/// Right-hand side of
/// `B_z(x) = x/(z-1) B_{z-1}(x) + (z-x)/(z-1) B_{z-1}(x-1)`, `Re z > 2`.
pub fn recursion_step(z: C64, x: f64) -> Result<C64> {
    if z.re <= 2.0 {
        return Err(Error::InvalidOrder {
            value: z,
            reason: "recursion needs Re z > 2",
        });
    }
    let lower = ComplexBSpline::new(z - 1.0)?;
    let a = lower.eval_time(x).value;
    let b = lower.eval_time(x - 1.0).value;
    Ok(x / (z - 1.0) * a + (z - x) / (z - 1.0) * b)
}

/// Compares a Riemann-sum convolution of `B_{z1}` and `B_{z2}` with
/// `B_{z1+z2}` on a grid starting at 0.
pub fn convolve_check(z1: C64, z2: C64, grid: &Grid) -> VerificationReport {
    let b = VerificationReport::builder("bspline.convolution")
        .complex("z1", z1)
        .complex("z2", z2)
        .param("step", grid.step())
        .param("end", grid.end());
    let splines = (
        ComplexBSpline::new(z1),
        ComplexBSpline::new(z2),
        ComplexBSpline::new(z1 + z2),
    );
    let (s1, s2, s12) = match splines {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return b.failed(&e),
    };
    if grid.start() != 0.0 {
        return b.failed(&Error::InvalidGrid("convolution grid must start at 0".into()));
    }
    let h = grid.step();
    let f: Vec<C64> = grid.points().map(|x| s1.eval_time(x).value).collect();
    let g: Vec<C64> = grid.points().map(|x| s2.eval_time(x).value).collect();
    let n = grid.count();
    let mut worst = 0.0f64;
    let mut at = 0.0;
    for i in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..=i {
            acc += f[j] * g[i - j];
        }
        let x = grid.point(i);
        let d = (acc * h - s12.eval_time(x).value).norm();
        if d > worst {
            worst = d;
            at = x;
        }
    }
    b.param("worst_x", at)
        .note("left Riemann sum of the sampled splines")
        .finish(worst, 10.0 * h, None)
}

/// Checks that `|B_z(x)| x^m` stays bounded along `x = 10, 20, 40, 80`.
pub fn decay_check(z: C64, m: u32) -> VerificationReport {
    let b = VerificationReport::builder("bspline.decay")
        .complex("z", z)
        .param("m", m);
    let s = match ComplexBSpline::new(z) {
        Ok(s) => s,
        Err(e) => return b.failed(&e),
    };
    if m as f64 >= z.re + 1.0 {
        return b.failed(&Error::InvalidOrder {
            value: z,
            reason: "decay exponent needs m < Re z + 1",
        });
    }
    let xs = [10.0f64, 20.0, 40.0, 80.0];
    let seq: Vec<f64> = xs.iter().map(|&x| s.eval(x).norm() * x.powi(m as i32)).collect();
    let mut ratio = 0.0f64;
    for w in seq.windows(2) {
        let r = if w[0] > 0.0 {
            w[1] / w[0]
        } else if w[1] == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        ratio = ratio.max(r);
    }
    let integer = as_integer(z).is_some();
    b.param("sequence", seq.clone())
        .note(if integer {
            "integer order: compact support"
        } else {
            "series with Fourier fallback on accuracy loss"
        })
        .finish(ratio, 2.0, None)
        .require(seq.iter().all(|v| v.is_finite()), "finite sequence")
}

fn sup(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

/// Integer orders reproduce the Cox–de Boor cardinal B-spline.
pub fn integer_reduction_check(n: usize, points: &[f64]) -> VerificationReport {
    let b = VerificationReport::builder("bspline.integer_reduction")
        .param("n", n as u64)
        .param("points", points.len() as u64);
    match ComplexBSpline::new(C64::new(n as f64, 0.0)) {
        Ok(s) => b.finish(
            sup(points
                .iter()
                .map(|&x| (s.eval_time(x).value - crate::classical::cardinal(n, x)).norm())),
            1e-9,
            None,
        ),
        Err(e) => b.failed(&e),
    }
}

/// `Σ_k B_n(x + k) = 1` for integer `n`.
pub fn partition_of_unity_check(n: usize, points: &[f64]) -> VerificationReport {
    let b = VerificationReport::builder("bspline.partition_of_unity")
        .param("n", n as u64)
        .param("points", points.len() as u64);
    match ComplexBSpline::new(C64::new(n as f64, 0.0)) {
        Ok(s) => b.finish(
            sup(points.iter().map(|&x| {
                let base = x.floor();
                let total: C64 = (-(n as i64) - 1..=n as i64 + 1)
                    .map(|k| s.eval_time(x - base + k as f64).value)
                    .sum();
                (total - 1.0).norm()
            })),
            1e-9,
            None,
        ),
        Err(e) => b.failed(&e),
    }
}

/// Fourier transform of the time-domain series (trapezoid rule, step 1/128
/// on `[0, 96]`) against `Ω^z` on `0.1 ≤ |ω| ≤ 20`, and `B̂_z(0) = 1`.
pub fn fourier_consistency_check(z: C64) -> VerificationReport {
    let b = VerificationReport::builder("bspline.fourier_consistency")
        .complex("z", z)
        .param("omega_range", vec![-20.0, 20.0])
        .param("excluded", vec![-0.1, 0.1]);
    let s = match ComplexBSpline::new(z) {
        Ok(s) => s,
        Err(e) => return b.failed(&e),
    };
    let h = 1.0 / 128.0;
    let end = 96.0;
    let n = (end / h) as usize;
    let samples: Vec<C64> = (0..=n)
        .map(|i| {
            let v = s.eval_time(i as f64 * h).value;
            if i == n {
                0.5 * v
            } else {
                v
            }
        })
        .collect();
    let freqs: Vec<f64> = (-200..=200).filter(|j: &i32| j.abs() >= 1).map(|j| j as f64 * 0.1).collect();
    let worst = sup(freqs.iter().map(|&w| {
        let step = C64::from_polar(1.0, -w * h);
        let mut phase = C64::new(1.0, 0.0);
        let mut acc = KahanSum::new();
        for v in &samples {
            acc.add(v * phase);
            phase *= step;
        }
        (acc.value() * h - s.eval_freq(w)).norm()
    }));
    let at_zero = (s.eval_freq(0.0) - 1.0).norm();
    b.param("step", h)
        .param("end", end)
        .finish_worst(vec![
            Comparison::new("transform of time samples", worst, 1e-4, None),
            Comparison::new("value at zero", at_zero, 0.0, None),
        ])
}

/// `B_z(x)` against the recursion from order `z - 1`.
pub fn recursion_check(samples: &[(C64, f64)]) -> VerificationReport {
    let b = VerificationReport::builder("bspline.recursion").param("samples", samples.len() as u64);
    let mut worst = 0.0f64;
    for &(z, x) in samples {
        let r = ComplexBSpline::new(z).and_then(|s| Ok((s.eval_time(x).value - recursion_step(z, x)?).norm()));
        match r {
            Ok(d) => worst = worst.max(d),
            Err(e) => return b.failed(&e),
        }
    }
    b.finish(worst, 1e-8, None)
}

/// The two series forms (recurrence and reciprocal-Gamma coefficients) agree.
pub fn series_forms_check(samples: &[(C64, f64)]) -> VerificationReport {
    let b = VerificationReport::builder("bspline.series_forms").param("samples", samples.len() as u64);
    let mut worst = 0.0f64;
    for &(z, x) in samples {
        match ComplexBSpline::new(z) {
            Ok(s) => {
                let u = s.eval_time(x).value;
                let v = s.eval_time_alt(x).value;
                worst = worst.max((u - v).norm() / u.norm().max(1.0));
            }
            Err(e) => return b.failed(&e),
        }
    }
    b.finish(worst, 1e-10, None)
}

/// The product of the modulus, phase and damping factors is `Ω^z`, and the
/// spectrum at `z̄` is the conjugate mirror of the one at `z`.
pub fn spectrum_structure_check(z: C64, freqs: &[f64]) -> VerificationReport {
    let b = VerificationReport::builder("bspline.spectrum_structure")
        .complex("z", z)
        .param("frequencies", freqs.len() as u64);
    let run = || -> Result<(f64, f64)> {
        let mut phase = 0.0f64;
        let mut mirror = 0.0f64;
        for &w in freqs {
            let f = eval_freq(z, w);
            let p = phase_factorization(z, w)?.product();
            phase = phase.max((p - f).norm() / f.norm().max(1e-300));
            mirror = mirror.max((eval_freq(z.conj(), -w) - f.conj()).norm());
        }
        Ok((phase, mirror))
    };
    match run() {
        Ok((p, m)) => b.finish_worst(vec![
            Comparison::new("phase factorization", p, 1e-12, None),
            Comparison::new("conjugate mirror", m, 1e-14, None),
        ]),
        Err(e) => b.failed(&e),
    }
}

/// For integer `n`, `B̂_n(2πK) = 0` for `K ≠ 0`.
pub fn symbol_zero_check(n: usize, ks: &[i32]) -> VerificationReport {
    let z = C64::new(n as f64, 0.0);
    let worst = sup(ks.iter().map(|&k| eval_freq(z, 2.0 * PI * k as f64).norm()));
    VerificationReport::builder("bspline.symbol_zeros")
        .param("n", n as u64)
        .param("k", ks.to_vec())
        .finish(worst, 1e-12, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_values() {
        let b2 = ComplexBSpline::new(C64::new(2.0, 0.0)).unwrap();
        assert!((b2.eval_time(1.0).value - 1.0).norm() < 1e-14);
        assert!((b2.eval_time(0.5).value - 0.5).norm() < 1e-14);
        assert_eq!(b2.eval_time(-1.0).value, C64::new(0.0, 0.0));
        let b3 = ComplexBSpline::new(C64::new(3.0, 0.0)).unwrap();
        assert!((b3.eval_time_alt(1.5).value - 0.75).norm() < 1e-14);
        assert_eq!(b3.eval_time_alt(0.0).value, C64::new(0.0, 0.0));
    }

    #[test]
    fn symbol() {
        assert_eq!(eval_freq(C64::new(2.5, 1.0), 0.0), C64::new(1.0, 0.0));
        assert!(eval_freq(C64::new(2.0, 0.0), 2.0 * PI).norm() < 1e-12);
        let near = eval_freq(C64::new(2.5, 1.0), 5e-5);
        let far = eval_freq(C64::new(2.5, 1.0), 1.5e-4);
        assert!((near - far).norm() < 1e-3);
    }

    #[test]
    fn factorization_edge_cases() {
        let p = phase_factorization(C64::new(2.5, 0.0), 1.3).unwrap();
        assert_eq!(p.phase_part, C64::new(1.0, 0.0));
        assert_eq!(p.damping_part, C64::new(1.0, 0.0));
        assert!(matches!(
            phase_factorization(C64::new(2.0, 1.0), 2.0 * PI),
            Err(Error::LogSingularity(_))
        ));
    }
}
