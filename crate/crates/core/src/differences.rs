//! Complex difference operators and the complex divided difference `[z; ℕ_0]`.
//!
//! * `∇₋^z g(t) = Σ_k (-1)^k C(z, k) g(t - k)`
//! * `∇₊^z g(t) = Σ_k (-1)^k C(z, k) g(t + k)`
//! * `[z; ℕ_0] g = Σ_k (-1)^k g(k) / (Γ(z - k + 1) Γ(k + 1))`
//!
//! Series stop once three consecutive terms are below `tol` times the
//! largest term seen so far.

use std::cell::RefCell;

use serde::Serialize;

use crate::bspline::ComplexBSpline;
use crate::dirichlet::{mc_over_simplex, KnotVector, WeightVector};
use crate::fractional::{frac_integral, tabulate, weyl_derivative, DEFAULT_WINDOW, TABLE_STEP};
use crate::numerics::gamma::{rgamma, rgamma_pair, trunc_pow};
use crate::numerics::quadrature::{integrate, QuadOptions};
use crate::numerics::sum::KahanSum;
use crate::numerics::{ComplexOrder, FracOrder, McConfig, SampledFunction, TestFunction};
use crate::report::{Comparison, VerificationReport};
use crate::{Error, Result, C64};

pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;
pub const MAX_TERMS: usize = 10_000;

/// Evaluates `Σ c_k g_k` with the three-small-terms stopping rule.
pub fn truncated_series<C, G>(mut coef: C, mut g: G, tol: f64) -> Result<C64>
where
    C: FnMut(usize) -> C64,
    G: FnMut(usize) -> Result<C64>,
{
    let mut acc = KahanSum::new();
    let mut running_max = 0.0f64;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let term = coef(k) * g(k)?;
        acc.add(term);
        let a = term.norm();
        if !a.is_finite() {
            return Err(Error::NoDecay(k));
        }
        running_max = running_max.max(a);
        if a <= tol * running_max {
            small += 1;
            if small >= 3 {
                return Ok(acc.value());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoDecay(MAX_TERMS))
}

/// `(-1)^k C(z, k)` by recurrence.
struct AltBinomials {
    z: C64,
    last: C64,
    k: usize,
}

impl AltBinomials {
    fn new(z: C64) -> Self {
        Self {
            z,
            last: C64::new(1.0, 0.0),
            k: 0,
        }
    }

    /// Coefficient `k`; must be called with `k = 0, 1, 2, …`.
    fn next(&mut self, k: usize) -> C64 {
        debug_assert_eq!(k, self.k);
        if k > 0 {
            self.last *= (k as f64 - 1.0 - self.z) / k as f64;
        }
        self.k += 1;
        self.last
    }
}

fn order(z: C64) -> Result<C64> {
    Ok(ComplexOrder::fractional(z)?.value())
}

/// Complex backward difference `∇₋^z g(t)`.
pub fn backward_diff(g: &dyn Fn(f64) -> C64, z: C64, t: f64) -> Result<C64> {
    let mut a = AltBinomials::new(order(z)?);
    truncated_series(|k| a.next(k), |k| Ok(g(t - k as f64)), DEFAULT_TRUNCATION_TOL)
}

/// Complex forward difference `∇₊^z g(t)`.
pub fn forward_diff(g: &dyn Fn(f64) -> C64, z: C64, t: f64) -> Result<C64> {
    let mut a = AltBinomials::new(order(z)?);
    truncated_series(|k| a.next(k), |k| Ok(g(t + k as f64)), DEFAULT_TRUNCATION_TOL)
}

/// The complex divided difference of order `z` with a truncation tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividedDifference {
    order: ComplexOrder,
    pub truncation_tol: f64,
}

impl DividedDifference {
    pub fn new(z: C64) -> Result<Self> {
        Ok(Self {
            order: ComplexOrder::fractional(z)?,
            truncation_tol: DEFAULT_TRUNCATION_TOL,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.truncation_tol = tol;
        self
    }

    pub fn order(&self) -> C64 {
        self.order.value()
    }

    /// `[z; ℕ_0] g` from lattice values `g(k)`.
    pub fn eval_lattice(&self, g: &mut dyn FnMut(usize) -> Result<C64>) -> Result<C64> {
        let z = self.order();
        truncated_series(
            |k| {
                let c = rgamma_pair(z, k);
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            },
            g,
            self.truncation_tol,
        )
    }

    pub fn eval(&self, g: &dyn Fn(f64) -> C64) -> Result<C64> {
        self.eval_lattice(&mut |k| Ok(g(k as f64)))
    }
}

/// `[z; ℕ_0] g`.
pub fn divided_diff(g: &dyn Fn(f64) -> C64, z: C64) -> Result<C64> {
    DividedDifference::new(z)?.eval(g)
}

/// `B_z(x) = z [z; ℕ_0] (x - ·)_+^{z-1}`.
pub fn spline_from_divided_diff(z: C64, x: f64) -> Result<C64> {
    ComplexOrder::spline(z)?;
    let d = DividedDifference::new(z)?;
    Ok(z * d.eval_lattice(&mut |k| trunc_pow(x - k as f64, z - 1.0))?)
}

/// Lazily cached lattice values `g(0), g(1), …`.
pub struct Lattice<'a> {
    g: &'a dyn Fn(f64) -> C64,
    vals: RefCell<Vec<C64>>,
}

impl<'a> Lattice<'a> {
    pub fn new(g: &'a dyn Fn(f64) -> C64) -> Self {
        Self {
            g,
            vals: RefCell::new(Vec::new()),
        }
    }

    pub fn get(&self, k: usize) -> C64 {
        let mut v = self.vals.borrow_mut();
        while v.len() <= k {
            let n = v.len();
            v.push((self.g)(n as f64));
        }
        v[k]
    }

    pub fn divided_diff(&self, z: C64) -> Result<C64> {
        DividedDifference::new(z)?.eval_lattice(&mut |k| Ok(self.get(k)))
    }

    pub fn forward_diff_at_zero(&self, z: C64) -> Result<C64> {
        let mut a = AltBinomials::new(order(z)?);
        truncated_series(|k| a.next(k), |k| Ok(self.get(k)), DEFAULT_TRUNCATION_TOL)
    }
}

/// Normalisation of the `B_z`-weighted integral of `D^z g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Normalization {
    GammaZ,
    GammaZPlus1,
}

/// Signed derivative `(-1)^m D^z g` tabulated on `[0, end]`.
pub fn derivative_table(g: &dyn TestFunction, z: C64, end: f64) -> Result<SampledFunction> {
    let fo = FracOrder::new(z)?;
    tabulate(|t| weyl_derivative(g, &fo, t, DEFAULT_WINDOW), 0.0, end, TABLE_STEP)
}

/// `∫_0^∞ B_z(t) h(t) dt` for a tabulated `h`, panels aligned with its grid.
fn integrate_spline_against(s: &ComplexBSpline, table: &SampledFunction) -> Result<C64> {
    let breaks: Vec<f64> = table.grid().points().collect();
    integrate(
        |t| s.eval_time(t).value * table.interp(t),
        &breaks,
        QuadOptions::with_tol(1e-10, 1e-15),
    )
}

fn spline_integral(g: &dyn TestFunction, z: C64) -> Result<C64> {
    let s = ComplexBSpline::new(z)?;
    let table = derivative_table(g, z, DEFAULT_WINDOW)?;
    integrate_spline_against(&s, &table)
}

/// `Γ(z)^{-1}` or `Γ(z+1)^{-1}` times `∫ B_z(t) D^z g(t) dt`, with the signed
/// derivative `(-1)^m D^z`.
pub fn divided_diff_integral_form(g: &dyn TestFunction, z: C64, normalization: Normalization) -> Result<C64> {
    let i = spline_integral(g, z)?;
    Ok(match normalization {
        Normalization::GammaZ => i * rgamma(z),
        Normalization::GammaZPlus1 => i * rgamma(z + 1.0),
    })
}

/// Evaluates both normalisations against `[z; ℕ_0] g` and records which match.
pub fn normalization_check(g: &dyn TestFunction, z: C64) -> VerificationReport {
    let rb = VerificationReport::builder("differences.normalization")
        .complex("z", z)
        .param("function", g.describe());
    let run = || -> Result<(C64, C64, C64)> {
        let i = spline_integral(g, z)?;
        let dd = divided_diff(&|x| g.eval(x), z)?;
        Ok((dd, i * rgamma(z), i * rgamma(z + 1.0)))
    };
    match run() {
        Ok((dd, gz, gz1)) => {
            let d0 = (gz - dd).norm();
            let d1 = (gz1 - dd).norm();
            let mut matching = Vec::new();
            if d0 <= 1e-5 {
                matching.push("GammaZ");
            }
            if d1 <= 1e-5 {
                matching.push("GammaZPlus1");
            }
            let m = FracOrder::new(z).map(|f| f.m).unwrap_or(0);
            rb.complex("divided_diff", dd)
                .complex("gamma_z", gz)
                .complex("gamma_z_plus_1", gz1)
                .param("discrepancy_gamma_z", d0)
                .param("discrepancy_gamma_z_plus_1", d1)
                .param("matching", matching)
                .note(format!(
                    "D^z taken with the (-1)^m sign, m = {m}; without it the integral flips sign for odd m"
                ))
                .finish(d1, 1e-5, None)
        }
        Err(e) => rb.failed(&e),
    }
}

/// `∫ B_z(t) g(t) dt = (∇₊^z D^{-z} g)(0)`.
pub fn weak_integral_identity(g: &dyn TestFunction, z: C64) -> VerificationReport {
    let rb = VerificationReport::builder("differences.weak_integral")
        .complex("z", z)
        .param("function", g.describe());
    let run = || -> Result<(C64, C64)> {
        let s = ComplexBSpline::new(z)?;
        let fo = FracOrder::new(z)?;
        let w = DEFAULT_WINDOW;
        let breaks: Vec<f64> = (0..=w as usize).map(|k| k as f64).collect();
        let lhs = integrate(|t| s.eval_time(t).value * g.eval(t), &breaks, QuadOptions::default())?;
        let mut a = AltBinomials::new(z);
        let rhs = truncated_series(
            |k| a.next(k),
            |k| frac_integral(g, &fo, k as f64, w),
            DEFAULT_TRUNCATION_TOL,
        )?;
        Ok((lhs, rhs))
    };
    match run() {
        Ok((l, r)) => rb
            .complex("lhs", l)
            .complex("rhs", r)
            .finish((l - r).norm(), 1e-5, None),
        Err(e) => rb.failed(&e),
    }
}

/// Monte Carlo and truncation settings for the Hermite–Genocchi check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HgConfig {
    pub mc: McConfig,
    /// Truncation `N` of the infinite simplex (knots `0, …, N`).
    pub truncation: usize,
}

/// `E[h(Σ_j j U_j)]` with `U` uniform on the simplex with `n + 1` vertices.
fn simplex_expectation(table: &SampledFunction, n: usize, cfg: McConfig) -> Result<crate::numerics::McEstimate> {
    let b = WeightVector::ones(n + 1);
    let tau = KnotVector::lattice(n);
    Ok(mc_over_simplex(&b, &tau, cfg, 1, |_, x, out| out[0] = table.interp(x[0]))?[0])
}

/// The four Hermite–Genocchi expressions for `[z; ℕ_0] g`:
///
/// 1. the divided difference itself,
/// 2. `Γ(z+1)^{-1} E[D^z g(Σ j U_j)]` over the uniform measure on the
///    truncated simplex,
/// 3. `Γ(z+1)^{-1} ∫ B_z D^z g`,
/// 4. `Γ(z+1)^{-1} (∇₊^z g)(0)`.
pub fn hermite_genocchi_check(g: &dyn TestFunction, z: C64, cfg: HgConfig) -> VerificationReport {
    let n = cfg.truncation;
    let rb = VerificationReport::builder("differences.hermite_genocchi")
        .complex("z", z)
        .param("function", g.describe())
        .param("samples", cfg.mc.samples as u64)
        .param("seed", cfg.mc.seed)
        .param("truncation", n as u64);
    let run = || -> Result<(Vec<Comparison>, Vec<(String, C64)>, Option<C64>)> {
        let s = ComplexBSpline::new(z)?;
        let norm = rgamma(z + 1.0);
        let gf = |x: f64| g.eval(x);
        let lattice = Lattice::new(&gf);
        let e1 = lattice.divided_diff(z)?;
        let e4 = lattice.forward_diff_at_zero(z)? * norm;
        let end = DEFAULT_WINDOW.max(2.0 * n as f64 + 1.0);
        let table = derivative_table(g, z, end)?;
        let e3 = integrate_spline_against(&s, &table)? * norm;
        let base = cfg.mc.stream * 64;
        let mc_n = simplex_expectation(&table, n, cfg.mc.with_stream(base))?;
        let mc_2n = simplex_expectation(&table, 2 * n, cfg.mc.with_stream(base + 1))?;
        let e2 = mc_n.estimate * norm;
        let e2b = mc_2n.estimate * norm;
        let sn = mc_n.stderr * norm.norm();
        let s2n = mc_2n.stderr * norm.norm();
        // the classical case: N equal to an integer order
        let classical = match crate::numerics::order::as_integer(z) {
            Some(k) if k as usize != n => {
                Some(simplex_expectation(&table, k as usize, cfg.mc.with_stream(base + 2))?.estimate * norm)
            }
            _ => None,
        };
        let vals = vec![
            ("divided_difference".to_string(), e1),
            ("simplex_mc".to_string(), e2),
            ("simplex_mc_2n".to_string(), e2b),
            ("spline_integral".to_string(), e3),
            ("forward_difference".to_string(), e4),
        ];
        let named = [("E1", e1, None), ("E2", e2, Some(sn)), ("E3", e3, None), ("E4", e4, None)];
        let mut comps = Vec::new();
        for i in 0..named.len() {
            for j in i + 1..named.len() {
                let (a, va, sa) = named[i];
                let (b, vb, sb) = named[j];
                let sigma = sa.or(sb);
                comps.push(Comparison::new(&format!("{a} vs {b}"), (va - vb).norm(), 1e-4, sigma));
            }
        }
        comps.push(Comparison::new(
            "truncation N vs 2N",
            (e2 - e2b).norm(),
            0.0,
            Some(sn.hypot(s2n)),
        ));
        Ok((comps, vals, classical))
    };
    match run() {
        Ok((comps, vals, classical)) => {
            let mut rb = rb;
            for (k, v) in vals {
                rb = rb.complex(&k, v);
            }
            if let Some(c) = classical {
                rb = rb.complex("simplex_mc_at_n_equal_order", c);
            }
            rb.note("E2 samples X = sum_j j U_j with U uniform on the truncated simplex")
                .finish_worst(comps)
        }
        Err(e) => rb.failed(&e),
    }
}
