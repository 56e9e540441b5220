//! Adaptive Gauss–Legendre quadrature and an endpoint-singular variant.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::{Error, Result, C64};

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_panels: 20_000,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (t * p - pm1) / (t * t - 1.0);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn gl10() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(10))
}

fn gl_panel<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> C64 {
    let (x, w) = gl10();
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let mut s = C64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w) {
        s += *wi * f(c + h * xi);
    }
    s * h
}

struct Panel {
    a: f64,
    b: f64,
    left: C64,
    right: C64,
    err: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, coarse: C64) -> Panel {
        let m = 0.5 * (a + b);
        let left = gl_panel(f, a, m);
        let right = gl_panel(f, m, b);
        let mut err = (left + right - coarse).norm();
        if (b - a) <= 1e-14 * a.abs().max(b.abs()).max(1e-300) {
            err = 0.0;
        }
        Panel {
            a,
            b,
            left,
            right,
            err,
        }
    }

    fn value(&self) -> C64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive integration of `f` over the panels defined by the sorted
/// breakpoints.
pub fn integrate<F: Fn(f64) -> C64>(f: F, breaks: &[f64], opts: QuadOptions) -> Result<C64> {
    if breaks.len() < 2 {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut heap = BinaryHeap::new();
    for ab in breaks.windows(2) {
        if ab[1] > ab[0] {
            let coarse = gl_panel(&f, ab[0], ab[1]);
            heap.push(Panel::new(&f, ab[0], ab[1], coarse));
        }
    }
    loop {
        let mut total = C64::new(0.0, 0.0);
        let mut err = 0.0;
        for p in heap.iter() {
            total += p.value();
            err += p.err;
        }
        if !total.re.is_finite() || !total.im.is_finite() || !err.is_finite() {
            return Err(Error::NoConvergence("non-finite integrand".into()));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            let mut panels = heap.into_vec();
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            return Ok(panels.iter().map(Panel::value).sum());
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::NoConvergence(format!(
                "{} panels, error estimate {err:.3e}",
                heap.len()
            )));
        }
        // Split the worst panels; refining several per pass keeps the
        // bookkeeping cost linear in practice.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(p) = heap.pop() else { break };
            if p.err == 0.0 {
                heap.push(p);
                break;
            }
            let m = 0.5 * (p.a + p.b);
            heap.push(Panel::new(&f, p.a, m, p.left));
            heap.push(Panel::new(&f, m, p.b, p.right));
        }
    }
}

/// `∫_a^b (t - a)^w f(t) dt` for `Re w > -1`.
///
/// The substitution `t = a + L u^p` with `p = 1/(1 + Re w)` removes the
/// algebraic part of the singularity; what is left (a bounded oscillation
/// `u^{i p Im w}`) is handled by dyadic grading towards `u = 0`.
pub fn integrate_singular<F: Fn(f64) -> C64>(
    f: F,
    a: f64,
    b: f64,
    w: C64,
    opts: QuadOptions,
) -> Result<C64> {
    if w.re <= -1.0 {
        return Err(Error::NonIntegrable(w));
    }
    let len = b - a;
    if len == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    if len < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "singular integral needs b >= a, got [{a}, {b}]"
        )));
    }
    let p = if w.re < 0.0 { 1.0 / (1.0 + w.re) } else { 1.0 };
    let e = if w.re < 0.0 { C64::new(0.0, p * w.im) } else { w };
    let g = |u: f64| f(a + len * u.powf(p));
    let scale = (w + 1.0) * len.ln();
    let factor = scale.exp() * p;
    let smooth = e.im == 0.0 && e.re >= 0.0 && e.re.fract() == 0.0;
    if smooth {
        let n = e.re as i32;
        let h = |u: f64| g(u) * u.powi(n);
        return Ok(factor * integrate(h, &[0.0, 0.5, 1.0], opts)?);
    }
    let levels = ((40.0 / (e.re + 1.0)).ceil() as i32).clamp(4, 40);
    let mut breaks: Vec<f64> = (0..=levels).rev().map(|j| 0.5f64.powi(j)).collect();
    breaks.dedup();
    let eps = breaks[0];
    let h = |u: f64| g(u) * (e * u.ln()).exp();
    let body = integrate(h, &breaks, opts)?;
    let tiny = g(eps) * ((e + 1.0) * eps.ln()).exp() / (e + 1.0);
    Ok(factor * (body + tiny))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn closed_forms() {
        let one = |_t: f64| C64::new(1.0, 0.0);
        let o = QuadOptions::default();
        let v = integrate_singular(one, 0.0, 1.0, C64::new(-0.5, 0.0), o).unwrap();
        assert!((v - 2.0).norm() < 1e-10);
        let w = C64::new(0.25, 0.5);
        let v = integrate_singular(one, 0.0, 1.0, w, o).unwrap();
        assert!((v - 1.0 / (w + 1.0)).norm() < 1e-10);
        assert!(matches!(
            integrate_singular(one, 0.0, 1.0, C64::new(-1.0, 0.3), o),
            Err(Error::NonIntegrable(_))
        ));
    }
}
