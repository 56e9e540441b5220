//! Analytic test functions with exact derivatives.

use super::grid::SampledFunction;
use crate::C64;

/// A function `ℝ → ℂ` with access to derivatives.
pub trait TestFunction: Sync {
    fn eval(&self, x: f64) -> C64;

    /// The `order`-th derivative at `x`, or `None` when unavailable.
    fn derivative(&self, order: u32, x: f64) -> Option<C64>;

    fn describe(&self) -> String {
        "f".into()
    }
}

const MAX_ORDER: usize = 16;

/// `amp · p(s) · exp(-a s - c s²)` with `s = x - shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPoly {
    amp: C64,
    shift: f64,
    a: f64,
    c: f64,
    /// Polynomial factor of the k-th derivative, ascending coefficients.
    derivs: Vec<Vec<f64>>,
    label: String,
}

fn horner(p: &[f64], s: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * s + c)
}

impl ExpPoly {
    pub fn new(poly: Vec<f64>, shift: f64, a: f64, c: f64) -> Self {
        let mut derivs = vec![poly];
        for _ in 0..MAX_ORDER {
            let p = derivs.last().unwrap();
            let mut q = vec![0.0; p.len() + 2];
            for (k, pk) in p.iter().enumerate() {
                if k > 0 {
                    q[k - 1] += k as f64 * pk;
                }
                q[k] -= a * pk;
                q[k + 1] -= 2.0 * c * pk;
            }
            while q.len() > 1 && *q.last().unwrap() == 0.0 {
                q.pop();
            }
            derivs.push(q);
        }
        let label = format!("poly{:?}*exp(-{a}s-{c}s^2), s=x-{shift}", derivs[0]);
        Self {
            amp: C64::new(1.0, 0.0),
            shift,
            a,
            c,
            derivs,
            label,
        }
    }

    pub fn scaled(mut self, amp: C64) -> Self {
        self.amp *= amp;
        self
    }

    pub fn labelled(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    /// `e^{-x}`.
    pub fn exp_decay() -> Self {
        Self::new(vec![1.0], 0.0, 1.0, 0.0).labelled("exp(-x)")
    }

    /// `x^k e^{-x}`.
    pub fn power_exp(k: usize) -> Self {
        let mut p = vec![0.0; k + 1];
        p[k] = 1.0;
        Self::new(p, 0.0, 1.0, 0.0).labelled(&format!("x^{k}*exp(-x)"))
    }

    /// `e^{-w (x - center)^2}`.
    pub fn gaussian(center: f64, w: f64) -> Self {
        Self::new(vec![1.0], center, 0.0, w).labelled(&format!("exp(-{w}(x-{center})^2)"))
    }

    /// `x^k e^{-x^2}`.
    pub fn power_gauss(k: usize) -> Self {
        let mut p = vec![0.0; k + 1];
        p[k] = 1.0;
        Self::new(p, 0.0, 0.0, 1.0).labelled(&format!("x^{k}*exp(-x^2)"))
    }

    /// A plain polynomial.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let label = format!("poly{coeffs:?}");
        Self::new(coeffs, 0.0, 0.0, 0.0).labelled(&label)
    }
}

impl TestFunction for ExpPoly {
    fn eval(&self, x: f64) -> C64 {
        self.derivative(0, x).unwrap()
    }

    fn derivative(&self, order: u32, x: f64) -> Option<C64> {
        let p = self.derivs.get(order as usize)?;
        let s = x - self.shift;
        let e = (-self.a * s - self.c * s * s).exp();
        Some(self.amp * (horner(p, s) * e))
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Linear combination of test functions.
pub struct Combination<'a> {
    pub terms: Vec<(C64, &'a dyn TestFunction)>,
}

impl TestFunction for Combination<'_> {
    fn eval(&self, x: f64) -> C64 {
        self.terms.iter().map(|(c, f)| c * f.eval(x)).sum()
    }

    fn derivative(&self, order: u32, x: f64) -> Option<C64> {
        let mut s = C64::new(0.0, 0.0);
        for (c, f) in &self.terms {
            s += c * f.derivative(order, x)?;
        }
        Some(s)
    }
}

/// The `order`-th derivative of another test function.
pub struct Derived<'a> {
    pub inner: &'a dyn TestFunction,
    pub order: u32,
}

impl TestFunction for Derived<'_> {
    fn eval(&self, x: f64) -> C64 {
        self.inner
            .derivative(self.order, x)
            .unwrap_or(C64::new(f64::NAN, f64::NAN))
    }

    fn derivative(&self, order: u32, x: f64) -> Option<C64> {
        self.inner.derivative(self.order + order, x)
    }
}

/// A plain closure; no derivatives beyond order zero.
pub struct FnTest<F>(pub F);

impl<F: Fn(f64) -> C64 + Sync> TestFunction for FnTest<F> {
    fn eval(&self, x: f64) -> C64 {
        (self.0)(x)
    }

    fn derivative(&self, order: u32, x: f64) -> Option<C64> {
        (order == 0).then(|| (self.0)(x))
    }
}

impl TestFunction for SampledFunction {
    fn eval(&self, x: f64) -> C64 {
        self.interp(x)
    }

    fn derivative(&self, order: u32, x: f64) -> Option<C64> {
        (order == 0).then(|| self.interp(x))
    }

    fn describe(&self) -> String {
        "sampled".into()
    }
}

/// Spot check of super-polynomial decay: `|f(x)| x^6` must shrink from
/// `x = 10` to `20` to `40`.
pub fn is_rapidly_decaying(f: &dyn TestFunction) -> bool {
    let v: Vec<f64> = [10.0f64, 20.0, 40.0]
        .iter()
        .map(|&x| f.eval(x).norm() * x.powi(6))
        .collect();
    v.iter().all(|x| x.is_finite()) && (v[2] < 1e-300 || (v[1] < v[0] && v[2] < v[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_closed_forms() {
        let f = ExpPoly::power_exp(2);
        let x: f64 = 1.3;
        let e = (-x).exp();
        // (x^2 e^-x)'' = (2 - 4x + x^2) e^-x
        let d2 = f.derivative(2, x).unwrap();
        assert!((d2.re - (2.0 - 4.0 * x + x * x) * e).abs() < 1e-14);
        let g = ExpPoly::gaussian(0.0, 1.0);
        // (e^{-x^2})' = -2x e^{-x^2}
        let d1 = g.derivative(1, x).unwrap();
        assert!((d1.re + 2.0 * x * (-x * x).exp()).abs() < 1e-14);
    }

    #[test]
    fn decay_spot_check() {
        assert!(is_rapidly_decaying(&ExpPoly::exp_decay()));
        assert!(is_rapidly_decaying(&ExpPoly::gaussian(3.0, 1.0)));
        assert!(!is_rapidly_decaying(&ExpPoly::polynomial(vec![0.0, 1.0])));
    }
}
