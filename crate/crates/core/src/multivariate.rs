//! Multivariate splines of complex order on a ray of equidistant knots, and
//! the exponential spline spectrum.
//!
//! The multivariate spline is defined through its ridge projections: along a
//! unit direction `λ` its spectrum is `((1 - e^{-i⟨λ,d⟩ϖ}) / (iϖ))^z` at
//! `ω = ϖλ`. The time-domain series
//! `C π^{z/2-s} i^{-z} 2^{-(z+3s)/2} Γ((s-z)/2)/Γ(z/2) Σ (-1)^n C(z,n) ‖x - nd‖^{z-s}`
//! is evaluated with a stopping rule and Richardson extrapolation of the
//! algebraic tail.

use rayon::prelude::*;

use crate::bspline::{eval_freq, eval_freq_spaced, omega_taylor, ComplexBSpline};
use crate::numerics::gamma::{gamma, rgamma};
use crate::numerics::sum::KahanSum;
use crate::numerics::{ComplexOrder, Grid, SampledFunction, TestFunction};
use crate::report::{fmt_complex, Comparison, VerificationReport};
use crate::{Error, Result, C64};

/// Default number of series terms before extrapolation.
pub const DEFAULT_TERMS: usize = 1024;
const POLE_MARGIN: f64 = 0.25;
const STOP_TOL: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A unit vector in `R^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    lambda: Vec<f64>,
}

impl Direction {
    /// Normalizes `v`, which must be finite and nonzero.
    pub fn new(v: &[f64]) -> Result<Self> {
        let n = norm(v);
        if v.is_empty() || !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidDirection(format!("cannot normalize {v:?}")));
        }
        Ok(Self {
            lambda: v.iter().map(|x| x / n).collect(),
        })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }
}

/// Knots `d N_0` on a ray with unit weights.
#[derive(Debug, Clone, PartialEq)]
pub struct EquidistantRay {
    d: Vec<f64>,
    order: ComplexOrder,
}

impl EquidistantRay {
    pub fn new(d: Vec<f64>, z: C64) -> Result<Self> {
        let n = norm(&d);
        if d.is_empty() || !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidDirection(format!("distance vector {d:?} must be nonzero")));
        }
        Ok(Self {
            d,
            order: ComplexOrder::spline(z)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }
    pub fn d(&self) -> &[f64] {
        &self.d
    }
    pub fn order(&self) -> C64 {
        self.order.value()
    }

    /// Projected knot spacing `⟨λ, d⟩`.
    pub fn spacing(&self, lambda: &Direction) -> f64 {
        dot(lambda.as_slice(), &self.d)
    }
}

fn check_dim(ray: &EquidistantRay, n: usize) -> Result<()> {
    if n != ray.dim() {
        return Err(Error::InvalidDirection(format!(
            "expected a vector of dimension {}, got {n}",
            ray.dim()
        )));
    }
    Ok(())
}

/// Spectrum at `ω = ϖλ`; at `ω = 0` the direction defaults to `d / ‖d‖`.
pub fn mv_freq(ray: &EquidistantRay, w: &[f64]) -> Result<C64> {
    check_dim(ray, w.len())?;
    let varpi = norm(w);
    let c = if varpi == 0.0 { norm(&ray.d) } else { dot(w, &ray.d) / varpi };
    Ok(eval_freq_spaced(ray.order(), c, varpi))
}

/// The time-domain prefactor `π^{z/2-s} / (i^z 2^{(z+3s)/2}) Γ((s-z)/2) / Γ(z/2)`.
pub fn series_prefactor(z: C64, s: usize) -> Result<C64> {
    let s = s as f64;
    let a = (s - z) / 2.0;
    let nearest = a.re.round().min(0.0);
    if (a - nearest).norm() < POLE_MARGIN {
        return Err(Error::Pole(a));
    }
    let ln_pi = std::f64::consts::PI.ln();
    let ln_2 = std::f64::consts::LN_2;
    let i_pow = (C64::new(0.0, std::f64::consts::FRAC_PI_2) * z).exp();
    let p = ((z / 2.0 - s) * ln_pi).exp() / (i_pow * ((z + 3.0 * s) / 2.0 * ln_2).exp());
    Ok(p * gamma(a)? * rgamma(z / 2.0))
}

/// The factor relating the series prefactor to the one obtained from the
/// Fourier transform of `‖x‖^{z-s}`: `π^{(z-s)/2} 2^{(z-3s)/2}`.
pub fn prefactor_ratio(z: C64, s: usize) -> C64 {
    let s = s as f64;
    (((z - s) / 2.0) * std::f64::consts::PI.ln() + ((z - 3.0 * s) / 2.0) * std::f64::consts::LN_2).exp()
}

/// Time-domain series at `x`. Stops early once terms fall below `1e-12` of
/// the running maximum; otherwise extrapolates the partial sums at
/// `terms/4, terms/2, terms`, whose tails behave like `K^{-s}` and `K^{-s-1}`.
pub fn mv_time(ray: &EquidistantRay, x: &[f64], terms: usize) -> Result<C64> {
    check_dim(ray, x.len())?;
    let z = ray.order();
    let s = ray.dim();
    let pre = series_prefactor(z, s)?;
    let e = z - s as f64;
    let k_max = terms.max(16);
    let mut acc = KahanSum::new();
    let mut partial = [C64::new(0.0, 0.0); 2];
    let mut coef = C64::new(1.0, 0.0);
    let mut running_max = 0.0f64;
    let mut small = 0;
    let mut y = vec![0.0; s];
    for n in 0..k_max {
        if n == k_max / 4 {
            partial[0] = acc.value();
        } else if n == k_max / 2 {
            partial[1] = acc.value();
        }
        if n > 0 {
            coef *= (n as f64 - 1.0 - z) / n as f64;
        }
        for (yi, (xi, di)) in y.iter_mut().zip(x.iter().zip(&ray.d)) {
            *yi = xi - n as f64 * di;
        }
        let r = norm(&y);
        let term = if r == 0.0 {
            if e.re > 0.0 {
                C64::new(0.0, 0.0)
            } else if e == C64::new(0.0, 0.0) {
                coef
            } else {
                return Err(Error::LatticePointSingularity(n));
            }
        } else {
            coef * (e * r.ln()).exp()
        };
        acc.add(term);
        let a = term.norm();
        running_max = running_max.max(a);
        if a <= STOP_TOL * running_max {
            small += 1;
            if small >= 3 {
                return Ok(pre * acc.value());
            }
        } else {
            small = 0;
        }
    }
    let full = acc.value();
    let p = 2f64.powi(s as i32);
    let q = 2.0 * p;
    let r1 = (p * partial[1] - partial[0]) / (p - 1.0);
    let r2 = (p * full - partial[1]) / (p - 1.0);
    Ok(pre * (q * r2 - r1) / (q - 1.0))
}

/// Inverse 2-d DFT of the spectrum on an `n × n` frequency grid with period
/// `period` in each coordinate, evaluated at each point.
pub fn mv_time_dft(ray: &EquidistantRay, points: &[[f64; 2]], n: usize, period: f64) -> Result<Vec<C64>> {
    if ray.dim() != 2 {
        return Err(Error::DimensionTooHigh(ray.dim()));
    }
    let dw = 2.0 * std::f64::consts::PI / period;
    let freqs: Vec<f64> = (0..n).map(|j| (j as f64 - (n / 2) as f64) * dw).collect();
    let spectrum: Vec<C64> = (0..n * n)
        .into_par_iter()
        .map(|idx| mv_freq(ray, &[freqs[idx / n], freqs[idx % n]]))
        .collect::<Result<_>>()?;
    let scale = (dw / (2.0 * std::f64::consts::PI)).powi(2);
    Ok(points
        .par_iter()
        .map(|x| {
            let e2: Vec<C64> = freqs.iter().map(|w| C64::from_polar(1.0, w * x[1])).collect();
            let mut acc = KahanSum::new();
            for (j, w1) in freqs.iter().enumerate() {
                let row = &spectrum[j * n..(j + 1) * n];
                let inner: C64 = row.iter().zip(&e2).map(|(f, e)| f * e).sum();
                acc.add(inner * C64::from_polar(1.0, w1 * x[0]));
            }
            acc.value() * scale
        })
        .collect())
}

/// Compares the time-domain series with the inverse DFT of the spectrum. A
/// single complex constant is fitted by least squares; the report records
/// it next to the analytic ratio of prefactors.
pub fn mv_duality_check(ray: &EquidistantRay, points: &[[f64; 2]], n: usize, period: f64) -> VerificationReport {
    let z = ray.order();
    let rb = VerificationReport::builder("multivariate.time_frequency_duality")
        .complex("z", z)
        .param("d", ray.d().to_vec())
        .param("grid", n as u64)
        .param("period", period)
        .param("window", "none");
    let run = || -> Result<(f64, C64, f64, f64)> {
        let dft = mv_time_dft(ray, points, n, period)?;
        let series: Vec<C64> = points
            .par_iter()
            .map(|x| mv_time(ray, x, DEFAULT_TERMS))
            .collect::<Result<_>>()?;
        let num: C64 = series.iter().zip(&dft).map(|(s, d)| s.conj() * d).sum();
        let den: f64 = series.iter().map(|s| s.norm_sqr()).sum();
        let fitted = num / den;
        let fit = series.iter().zip(&dft).map(|(s, d)| (fitted * s - d).norm()).fold(0.0, f64::max);
        let raw = series.iter().zip(&dft).map(|(s, d)| (s - d).norm()).fold(0.0, f64::max);
        let analytic = 1.0 / prefactor_ratio(z, 2);
        let analytic_err = series.iter().zip(&dft).map(|(s, d)| (analytic * s - d).norm()).fold(0.0, f64::max);
        Ok((fit, fitted, raw, analytic_err))
    };
    match run() {
        Ok((fit, fitted, raw, analytic_err)) => {
            let analytic = 1.0 / prefactor_ratio(z, 2);
            rb.complex("fitted_constant", fitted)
                .complex("analytic_constant", analytic)
                .param("constant_relative_deviation", (fitted - analytic).norm() / analytic.norm())
                .param("discrepancy_without_constant", raw)
                .param("discrepancy_with_analytic_constant", analytic_err)
                .note(format!(
                    "series prefactor differs from the transform of the series by the global constant {}; \
                     the comparison applies the fitted constant",
                    fmt_complex(fitted)
                ))
                .finish(fit, 5e-3, None)
        }
        Err(e) => rb.failed(&e),
    }
}

/// Symbol zeros: for integer `z` the spectrum vanishes where `ϖ⟨λ,d⟩ = 2πK`.
pub fn mv_zero_check(ray: &EquidistantRay, lambda: &Direction, ks: &[i32]) -> VerificationReport {
    let rb = VerificationReport::builder("multivariate.symbol_zeros")
        .complex("z", ray.order())
        .param("d", ray.d().to_vec())
        .param("lambda", lambda.as_slice().to_vec());
    let run = || -> Result<f64> {
        if crate::numerics::order::as_integer(ray.order()).is_none() {
            return Err(Error::InvalidOrder {
                value: ray.order(),
                reason: "symbol zeros need an integer order",
            });
        }
        let c = ray.spacing(lambda);
        if c == 0.0 {
            return Err(Error::InvalidDirection("direction is orthogonal to the ray".into()));
        }
        let mut worst = 0.0f64;
        for k in ks {
            let varpi = (2.0 * std::f64::consts::PI * *k as f64 / c).abs();
            let w: Vec<f64> = lambda.as_slice().iter().map(|l| l * varpi).collect();
            worst = worst.max(mv_freq(ray, &w)?.norm());
        }
        Ok(worst)
    };
    match run() {
        Ok(d) => rb.param("k", ks.to_vec()).finish(d, 1e-12, None),
        Err(e) => rb.failed(&e),
    }
}

/// `mv_freq(ϖλ)` against the univariate spectrum at spacing `⟨λ,d⟩`.
pub fn projection_law_check(ray: &EquidistantRay, samples: &[(Direction, f64)]) -> VerificationReport {
    let rb = VerificationReport::builder("multivariate.projection_law")
        .complex("z", ray.order())
        .param("d", ray.d().to_vec())
        .param("samples", samples.len() as u64);
    let mut worst = 0.0f64;
    for (lambda, varpi) in samples {
        let w: Vec<f64> = lambda.as_slice().iter().map(|l| l * varpi).collect();
        match mv_freq(ray, &w) {
            Ok(v) => {
                let u = eval_freq_spaced(ray.order(), ray.spacing(lambda), *varpi);
                worst = worst.max((v - u).norm() / u.norm().max(1.0));
            }
            Err(e) => return rb.failed(&e),
        }
    }
    rb.finish(worst, 1e-14, None)
}

/// Univariate spline with knots `c N_0` and spectrum `((1 - e^{-icω})/(iω))^z`,
/// that is `c^{z-1} B_z(t / c)`.
pub fn projected_spline(z: C64, c: f64, t: f64) -> Result<C64> {
    if !(c > 0.0) {
        return Err(Error::InvalidDirection(format!("projected spacing {c} must be positive")));
    }
    let b = ComplexBSpline::new(z)?;
    Ok(b.eval(t / c) * ((z - 1.0) * c.ln()).exp())
}

/// Line projection `P(t) = ∫ B(tλ + rλ⊥) dr` of the time-domain series,
/// by the trapezoid rule over `|r| ≤ half_width`.
pub fn line_projection(ray: &EquidistantRay, lambda: &Direction, t: f64, step: f64, half_width: f64) -> Result<C64> {
    if ray.dim() != 2 || lambda.dim() != 2 {
        return Err(Error::DimensionTooHigh(ray.dim()));
    }
    let l = lambda.as_slice();
    let perp = [-l[1], l[0]];
    let m = (half_width / step).round() as i64;
    let mut acc = KahanSum::new();
    for j in -m..=m {
        let r = j as f64 * step;
        let x = [t * l[0] + r * perp[0], t * l[1] + r * perp[1]];
        let w = if j.abs() == m { 0.5 } else { 1.0 };
        acc.add(w * mv_time(ray, &x, DEFAULT_TERMS / 4)?);
    }
    Ok(acc.value() * step)
}

/// `∫ g(⟨λ,x⟩) B(x) dx = ∫ g(t) B_z(t | λτ) dt` at `s = 2`, with the left
/// side built from line projections of the time-domain series and the
/// right side from the univariate spline at the projected spacing.
pub fn ridge_consistency_check(
    ray: &EquidistantRay,
    lambda: &Direction,
    g: &dyn TestFunction,
    grid: &Grid,
) -> VerificationReport {
    let z = ray.order();
    let half_width = 16.0;
    let rb = VerificationReport::builder("multivariate.ridge_consistency")
        .complex("z", z)
        .param("d", ray.d().to_vec())
        .param("lambda", lambda.as_slice().to_vec())
        .param("function", g.describe())
        .param("t_range", vec![grid.start(), grid.end()])
        .param("step", grid.step())
        .param("perpendicular_half_width", half_width);
    let run = || -> Result<(C64, C64, C64, f64, f64)> {
        let c = ray.spacing(lambda);
        if !(c > 0.0) {
            return Err(Error::InvalidDirection(format!("projected spacing {c} must be positive")));
        }
        let ts: Vec<f64> = grid.points().collect();
        let proj: Vec<C64> = ts
            .par_iter()
            .map(|t| line_projection(ray, lambda, *t, grid.step(), half_width))
            .collect::<Result<_>>()?;
        let uni: Vec<C64> = ts.iter().map(|t| projected_spline(z, c, *t)).collect::<Result<_>>()?;
        let gv: Vec<C64> = ts.iter().map(|t| g.eval(*t)).collect();
        let trap = |v: &[C64]| -> C64 {
            let n = v.len();
            v.iter()
                .enumerate()
                .map(|(i, x)| if i == 0 || i + 1 == n { 0.5 * x } else { *x })
                .sum::<C64>()
                * grid.step()
        };
        let lhs = trap(&gv.iter().zip(&proj).map(|(a, b)| a * b).collect::<Vec<_>>());
        let rhs = trap(&gv.iter().zip(&uni).map(|(a, b)| a * b).collect::<Vec<_>>());
        let i_neg = ts
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 + 2.0).abs().total_cmp(&(b.1 + 2.0).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let lead = proj[..=i_neg].iter().map(|p| p.norm()).fold(0.0, f64::max);
        Ok((lhs, rhs, proj[i_neg], ts[i_neg], lead))
    };
    match run() {
        Ok((l, r, p_neg, t_neg, lead)) => rb
            .complex("lhs", l)
            .complex("rhs", r)
            .complex("ratio", l / r)
            .complex("ratio_with_analytic_constant", l / r / prefactor_ratio(z, 2))
            .param("projection_at_t", t_neg)
            .complex("projection_value", p_neg)
            .param("max_projection_before_t", lead)
            .note(format!(
                "the projected series does not vanish for negative t (|P({t_neg})| = {:.3e}); \
                 the univariate spline on the projected knots does",
                p_neg.norm()
            ))
            .finish((l - r).norm() / r.norm(), 1e-3, None),
        Err(e) => rb.failed(&e),
    }
}

/// `((1 - e^{-(a+iω)}) / (a + iω))^z` for `a ≥ 0`.
pub fn exp_spline_freq(a: f64, z: C64, w: f64) -> Result<C64> {
    if a < 0.0 || a.is_nan() {
        return Err(Error::NegativeA(a));
    }
    if a == 0.0 {
        return Ok(eval_freq(z, w));
    }
    let s = C64::new(a, w);
    let base = if s.norm() < 1e-4 {
        omega_taylor(-s)
    } else {
        // 1 - e^{-s} without cancellation for small s
        let half = (0.5 * w).sin();
        let num = C64::new(-(-a).exp_m1() * w.cos() + 2.0 * half * half, (-a).exp() * w.sin());
        num / s
    };
    Ok((z * base.ln()).exp())
}

/// Frequency cutoff for the inverse transform: the first `2π · 2^k`, `k ≥ 4`,
/// beyond which the spectrum stays below `1e-6` over the last period.
fn frequency_cutoff(a: f64, z: C64) -> Result<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut top = two_pi * 16.0;
    while top < two_pi * 65536.0 {
        let mut edge = 0.0f64;
        for j in 0..=64 {
            let w = top - two_pi * j as f64 / 64.0;
            edge = edge.max(exp_spline_freq(a, z, w)?.norm()).max(exp_spline_freq(a, z, -w)?.norm());
        }
        if edge < 1e-6 {
            return Ok(top);
        }
        top *= 2.0;
    }
    Ok(top)
}

/// Exponential spline in time by inverse Fourier transform: trapezoid rule
/// with `Δω = 2π/64` on `|ω| ≤ Ω_max` and a Hann window.
pub fn exp_spline_time(a: f64, z: C64, grid: &Grid) -> Result<SampledFunction> {
    let z = ComplexOrder::spline(z)?.value();
    let top = frequency_cutoff(a, z)?;
    let dw = 2.0 * std::f64::consts::PI / 64.0;
    let m = (top / dw).round() as i64;
    let weighted: Vec<(f64, C64)> = (-m..=m)
        .map(|j| {
            let w = j as f64 * dw;
            let hann = 0.5 * (1.0 + (std::f64::consts::PI * w / top).cos());
            exp_spline_freq(a, z, w).map(|f| (w, f * hann))
        })
        .collect::<Result<_>>()?;
    let scale = dw / (2.0 * std::f64::consts::PI);
    let vals: Vec<C64> = grid
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|x| {
            let mut acc = KahanSum::new();
            for (w, f) in &weighted {
                acc.add(f * C64::from_polar(1.0, w * x));
            }
            acc.value() * scale
        })
        .collect();
    SampledFunction::new(*grid, vals)
}

/// At `a = 0` the exponential spline is the complex B-spline, in frequency
/// (to `1e-14`) and in time (to `1e-3`).
pub fn exp_spline_reduction_check(z: C64, grid: &Grid) -> VerificationReport {
    let rb = VerificationReport::builder("multivariate.exp_spline_reduction")
        .complex("z", z)
        .param("t_range", vec![grid.start(), grid.end()])
        .param("step", grid.step());
    let run = || -> Result<(f64, f64)> {
        let b = ComplexBSpline::new(z)?;
        let mut freq = 0.0f64;
        for j in -400..=400 {
            let w = j as f64 * 0.05 + 0.013;
            freq = freq.max((exp_spline_freq(0.0, z, w)? - b.eval_freq(w)).norm());
        }
        let e = exp_spline_time(0.0, z, grid)?;
        let time = grid
            .points()
            .zip(e.values())
            .map(|(x, v)| (v - b.eval(x)).norm())
            .fold(0.0, f64::max);
        Ok((freq, time))
    };
    match run() {
        Ok((f, t)) => rb.finish_worst(vec![
            Comparison::new("frequency", f, 1e-14, None),
            Comparison::new("time", t, 1e-3, None),
        ]),
        Err(e) => rb.failed(&e),
    }
}

/// `|Ê(a, ω) - Ê(0, ω)|` decreases as `a` runs through `0.1, 0.01, 0.001`.
pub fn exp_spline_continuity_check(z: C64, freqs: &[f64]) -> VerificationReport {
    let rb = VerificationReport::builder("multivariate.exp_spline_continuity")
        .complex("z", z)
        .param("omega", freqs.to_vec())
        .param("a", vec![0.1, 0.01, 0.001]);
    let run = || -> Result<Vec<Comparison>> {
        let mut out = Vec::new();
        for w in freqs {
            let e0 = exp_spline_freq(0.0, z, *w)?;
            let d: Vec<f64> = [0.1, 0.01, 0.001]
                .iter()
                .map(|a| exp_spline_freq(*a, z, *w).map(|e| (e - e0).norm()))
                .collect::<Result<_>>()?;
            out.push(Comparison::new(&format!("omega {w}: a=0.01 vs 0.1"), d[1], d[0], None));
            out.push(Comparison::new(&format!("omega {w}: a=0.001 vs 0.01"), d[2], d[1], None));
        }
        Ok(out)
    };
    match run() {
        Ok(c) => rb.finish_worst(c),
        Err(e) => rb.failed(&e),
    }
}

/// Mass of the exponential spline outside `[0, Re z]` and its most negative
/// value, from the inverse transform on `grid`.
pub fn exp_spline_support(a: f64, z: C64, grid: &Grid) -> Result<(f64, f64, f64)> {
    let e = exp_spline_time(a, z, grid)?;
    let upper = z.re;
    let mut outside = 0.0;
    let mut min = f64::INFINITY;
    let mut imag = 0.0f64;
    for (x, v) in grid.points().zip(e.values()) {
        if x < 0.0 || x > upper {
            outside += v.re.abs() * grid.step();
        }
        min = min.min(v.re);
        imag = imag.max(v.im.abs());
    }
    Ok((outside, min, imag))
}
