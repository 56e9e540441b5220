//! Dirichlet measures on simplices and Dirichlet averages.
//!
//! For weights `b` and knots `τ`, the Dirichlet average of `f` is
//! `F(b; τ) = E f(u · τ)` with `u` distributed on the simplex with density
//! proportional to `Π u_j^{b_j - 1}`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::fractional::{right_integral, tabulate, weyl_derivative, DEFAULT_WINDOW, TABLE_STEP};
use crate::numerics::gamma::{gamma, rgamma};
use crate::numerics::quadrature::gauss_legendre;
use crate::numerics::rng::{mc_collect, mc_means};
use crate::numerics::{FracOrder, Grid, McConfig, McEstimate, SampledFunction, TestFunction};
use crate::report::{Comparison, VerificationReport};
use crate::{Error, Result, C64};

/// Largest simplex dimension handled by deterministic quadrature.
pub const MAX_QUADRATURE_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Real positive weights; the measure is a probability and can be sampled.
    PositiveReal,
    /// Complex weights with positive real part; quadrature only.
    Complex,
}

/// Weights `b_0, …, b_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    entries: Vec<C64>,
    mode: WeightMode,
}

impl WeightVector {
    pub fn positive(b: &[f64]) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if let Some(x) = b.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
            return Err(Error::InvalidWeights(format!("weight {x} is not positive")));
        }
        Ok(Self {
            entries: b.iter().map(|&x| C64::new(x, 0.0)).collect(),
            mode: WeightMode::PositiveReal,
        })
    }

    pub fn complex(b: &[C64]) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if let Some(x) = b.iter().find(|x| !(x.re > 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {x} needs Re > 0")));
        }
        Ok(Self {
            entries: b.to_vec(),
            mode: WeightMode::Complex,
        })
    }

    /// The all-ones vector `e` of length `n`.
    pub fn ones(n: usize) -> Self {
        Self::positive(&vec![1.0; n.max(1)]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }
    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn real(&self) -> Vec<f64> {
        self.entries.iter().map(|b| b.re).collect()
    }

    pub fn total(&self) -> C64 {
        self.entries.iter().sum()
    }

    /// Normalised weight `w_j = b_j / Σ b`.
    pub fn w(&self, j: usize) -> C64 {
        self.entries[j] / self.total()
    }

    /// `b + e_j`.
    pub fn shifted(&self, j: usize) -> Self {
        let mut s = self.clone();
        s.entries[j] += 1.0;
        s
    }

    fn is_unit(&self) -> bool {
        self.entries.iter().all(|b| *b == C64::new(1.0, 0.0))
    }

    fn require_samplable(&self) -> Result<()> {
        if self.mode != WeightMode::PositiveReal {
            return Err(Error::InvalidWeights(
                "complex weights cannot be sampled; use quadrature".into(),
            ));
        }
        Ok(())
    }
}

/// Knots `τ^0, …, τ^N` in `ℝ^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    points: Vec<Vec<f64>>,
    /// The knots are a truncation of an infinite sequence.
    pub declared_infinite: bool,
    /// `max_{n ≥ 1} ‖τ^n‖^{1/n}`, a finite proxy for the growth condition.
    pub growth_proxy: f64,
    pub growth_ok: bool,
}

impl KnotVector {
    pub fn scalar(t: &[f64]) -> Result<Self> {
        Self::vectors(t.iter().map(|&x| vec![x]).collect())
    }

    pub fn vectors(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidKnots("no knots".into()));
        }
        let s = points[0].len();
        if s == 0 || points.iter().any(|p| p.len() != s) {
            return Err(Error::InvalidKnots("knots must share a positive dimension".into()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidKnots("non-finite knot".into()));
        }
        let growth_proxy = points
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, p)| p.iter().map(|x| x * x).sum::<f64>().sqrt().powf(1.0 / n as f64))
            .fold(0.0, f64::max);
        Ok(Self {
            points,
            declared_infinite: false,
            growth_proxy,
            growth_ok: growth_proxy.is_finite(),
        })
    }

    /// Marks the knots as the truncation of an infinite sequence.
    pub fn truncated(mut self) -> Self {
        self.declared_infinite = true;
        self
    }

    /// The first `n + 1` points of `d ℕ_0` for scalar `d`.
    pub fn lattice(n: usize) -> Self {
        let t: Vec<f64> = (0..=n).map(|k| k as f64).collect();
        Self::scalar(&t).unwrap().truncated()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// First coordinate of every knot.
    pub fn scalars(&self) -> Vec<f64> {
        self.points.iter().map(|p| p[0]).collect()
    }

    /// `u · τ`, written as `τ^0 + Σ u_j (τ^j - τ^0)` so that equal knots give
    /// their common value exactly.
    pub fn combine(&self, u: &[f64], out: &mut [f64]) {
        let t0 = &self.points[0];
        out.copy_from_slice(t0);
        for (uj, tj) in u.iter().zip(&self.points).skip(1) {
            for ((o, a), b) in out.iter_mut().zip(tj).zip(t0) {
                *o += uj * (a - b);
            }
        }
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        let mut k = self.clone();
        k.points = perm.iter().map(|&i| self.points[i].clone()).collect();
        k
    }
}

/// A point of the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSample {
    pub u: Vec<f64>,
}

/// Prepared sampler for a fixed weight vector.
#[derive(Debug, Clone)]
pub struct DirichletSampler {
    gammas: Vec<Gamma<f64>>,
    shapes: Vec<f64>,
    uniform: bool,
}

impl DirichletSampler {
    pub fn new(b: &WeightVector) -> Result<Self> {
        b.require_samplable()?;
        let gammas = b
            .real()
            .iter()
            .map(|&x| Gamma::new(x, 1.0).map_err(|e| Error::InvalidWeights(e.to_string())))
            .collect::<Result<_>>()?;
        Ok(Self {
            gammas,
            shapes: b.real(),
            uniform: b.is_unit(),
        })
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }
    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// Fills `u` (length `n + 1`) with one draw.
    pub fn fill(&self, rng: &mut ChaCha8Rng, u: &mut [f64]) {
        let n = self.gammas.len();
        if n == 1 {
            u[0] = 1.0;
            return;
        }
        if self.uniform {
            // spacings of sorted uniforms
            let mut s: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>()).collect();
            s.sort_by(f64::total_cmp);
            let mut prev = 0.0;
            for (ui, si) in u.iter_mut().zip(&s) {
                *ui = si - prev;
                prev = *si;
            }
            u[n - 1] = 1.0 - prev;
            return;
        }
        let mut total = 0.0;
        for (ui, g) in u.iter_mut().zip(&self.gammas) {
            *ui = g.sample(rng);
            total += *ui;
        }
        if total > 0.0 {
            for ui in u.iter_mut() {
                *ui /= total;
            }
        } else {
            // every gamma draw underflowed; fall back to the largest weight
            let j = self
                .shapes
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(j, _)| j)
                .unwrap_or(0);
            u.iter_mut().for_each(|x| *x = 0.0);
            u[j] = 1.0;
        }
    }
}

/// One Dirichlet draw.
pub fn sample_dirichlet(b: &WeightVector, rng: &mut ChaCha8Rng) -> Result<SimplexSample> {
    let s = DirichletSampler::new(b)?;
    let mut u = vec![0.0; b.len()];
    s.fill(rng, &mut u);
    Ok(SimplexSample { u })
}

fn check_lengths(b: &WeightVector, tau: &KnotVector) -> Result<()> {
    if b.len() != tau.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} knots",
            b.len(),
            tau.len()
        )));
    }
    Ok(())
}

/// Monte Carlo estimates of `E[h_i(u, u·τ)]`, `h` filling `dim` outputs.
pub fn mc_over_simplex<H>(b: &WeightVector, tau: &KnotVector, cfg: McConfig, dim: usize, h: H) -> Result<Vec<McEstimate>>
where
    H: Fn(&[f64], &[f64], &mut [C64]) + Sync,
{
    check_lengths(b, tau)?;
    let sampler = DirichletSampler::new(b)?;
    let n = b.len();
    let s = tau.dim();
    Ok(mc_means(cfg, dim, |rng, out| {
        let mut u = vec![0.0; n];
        let mut x = vec![0.0; s];
        sampler.fill(rng, &mut u);
        tau.combine(&u, &mut x);
        h(&u, &x, out);
    }))
}

/// Samples of `u · τ` for scalar knots.
pub fn sample_points(b: &WeightVector, tau: &KnotVector, cfg: McConfig) -> Result<Vec<f64>> {
    check_lengths(b, tau)?;
    let sampler = DirichletSampler::new(b)?;
    let n = b.len();
    Ok(mc_collect(cfg, |rng| {
        let mut u = vec![0.0; n];
        let mut x = [0.0];
        sampler.fill(rng, &mut u);
        tau.combine(&u, &mut x);
        x[0]
    }))
}

/// Monte Carlo Dirichlet average `E f(u · τ)` with its standard error.
pub fn average_mc(
    f: &(dyn Fn(&[f64]) -> C64 + Sync),
    b: &WeightVector,
    tau: &KnotVector,
    cfg: McConfig,
) -> Result<McEstimate> {
    Ok(mc_over_simplex(b, tau, cfg, 1, |_, x, out| out[0] = f(x))?[0])
}

/// Nodes and weights for `∫_0^1 v^{α-1} (1-v)^{β-1} h(v) dv / B(α, β)`.
fn beta_rule(alpha: C64, beta: C64) -> Result<Vec<(f64, C64)>> {
    let (x, w) = gauss_legendre(10);
    let norm = gamma(alpha + beta)? * rgamma(alpha) * rgamma(beta);
    let mut rule = Vec::new();
    // left half carries v^{α-1}, right half (1-v)^{β-1}; mirrored below
    for (side, (ws, other)) in [(alpha - 1.0, beta - 1.0), (beta - 1.0, alpha - 1.0)]
        .into_iter()
        .enumerate()
    {
        // v = u^p turns v^{ws} dv into an integer power of u (up to an
        // oscillating factor for complex ws); p >= 1 keeps the rest smooth
        let m = if ws.im == 0.0 { (1.0 + ws.re).ceil().max(1.0) } else { 1.0 };
        let (p, e) = if ws.re < 0.0 || (ws.im == 0.0 && ws.re.fract() != 0.0) {
            let p = m / (1.0 + ws.re);
            (p, C64::new(m - 1.0, p * ws.im))
        } else {
            (1.0, ws)
        };
        let pre = (((ws + 1.0) * 0.5f64.ln()).exp()) * p;
        let smooth = e.im == 0.0 && e.re >= 0.0 && e.re.fract() == 0.0;
        let levels: i32 = if smooth {
            1
        } else if ws.im != 0.0 {
            30
        } else {
            14
        };
        let mut breaks: Vec<f64> = (0..=levels).rev().map(|j| 0.5f64.powi(j)).collect();
        if smooth && p != 1.0 {
            // the other factor picks up powers u^{kp}; grade towards 0, and
            // towards 1 where u^p is steep for small weights
            let depth = if p.fract() == 0.0 { 6 } else { 10 };
            breaks = (1..=depth).rev().map(|j| 0.5f64.powi(j)).collect();
            breaks.insert(0, 0.0);
            breaks.extend((2..=4).map(|j| 1.0 - 0.5f64.powi(j)));
            breaks.push(1.0);
        } else if smooth {
            breaks.insert(0, 0.0);
        }
        let mut push = |u: f64, wt: C64| {
            let s = 0.5 * u.powf(p);
            let v = if side == 0 { s } else { 1.0 - s };
            let o = (other * (1.0 - s).ln()).exp();
            rule.push((v, norm * pre * wt * o));
        };
        for ab in breaks.windows(2) {
            let (a, b) = (ab[0], ab[1]);
            let h = 0.5 * (b - a);
            for (xi, wi) in x.iter().zip(&w) {
                let u = 0.5 * (a + b) + h * xi;
                push(u, *wi * h * (e * u.ln()).exp());
            }
        }
        if !smooth {
            let eps = breaks[0];
            push(eps, ((e + 1.0) * eps.ln()).exp() / (e + 1.0));
        }
    }
    Ok(rule)
}

/// Deterministic Dirichlet average for at most four knots, complex weights
/// allowed. Stick-breaking: `u_0 = v_0`, `u_1 = (1 - v_0) v_1`, … with
/// independent `v_i ~ Beta(b_i, b_{i+1} + … + b_n)`.
pub fn average_quadrature(f: &dyn Fn(&[f64]) -> C64, b: &WeightVector, tau: &KnotVector) -> Result<C64> {
    check_lengths(b, tau)?;
    let n = b.len() - 1;
    if n > MAX_QUADRATURE_DIM {
        return Err(Error::DimensionTooHigh(n));
    }
    let e = b.entries();
    let mut rules = Vec::with_capacity(n);
    for i in 0..n {
        let rest: C64 = e[i + 1..].iter().sum();
        rules.push(beta_rule(e[i], rest)?);
    }
    let mut u = vec![0.0; n + 1];
    let mut x = vec![0.0; tau.dim()];
    fn level(
        i: usize,
        remaining: f64,
        rules: &[Vec<(f64, C64)>],
        u: &mut [f64],
        x: &mut [f64],
        tau: &KnotVector,
        f: &dyn Fn(&[f64]) -> C64,
    ) -> C64 {
        if i == rules.len() {
            u[i] = remaining;
            tau.combine(u, x);
            return f(x);
        }
        let mut s = C64::new(0.0, 0.0);
        for &(v, w) in &rules[i] {
            u[i] = remaining * v;
            s += w * level(i + 1, remaining * (1.0 - v), rules, u, x, tau, f);
        }
        s
    }
    Ok(level(0, 1.0, &rules, &mut u, &mut x, tau, f))
}

fn cfg_params(b: crate::report::ReportBuilder, cfg: McConfig) -> crate::report::ReportBuilder {
    b.param("samples", cfg.samples as u64)
        .param("seed", cfg.seed)
        .param("stream", cfg.stream)
}

fn weights_param(b: &WeightVector) -> serde_json::Value {
    serde_json::Value::from(
        b.entries()
            .iter()
            .map(|z| crate::report::fmt_complex(*z))
            .collect::<Vec<_>>(),
    )
}

fn knots_param(t: &KnotVector) -> serde_json::Value {
    if t.dim() == 1 {
        serde_json::Value::from(t.scalars())
    } else {
        serde_json::Value::from(t.points().to_vec())
    }
}

/// `E[u_j] = b_j / Σ b`.
pub fn moment_identity_check(b: &WeightVector, j: usize, cfg: McConfig) -> VerificationReport {
    let rb = cfg_params(
        VerificationReport::builder("dirichlet.moment")
            .param("weights", weights_param(b))
            .param("j", j as u64),
        cfg,
    );
    if j >= b.len() {
        return rb.failed(&Error::InvalidWeights(format!("index {j} out of range")));
    }
    let tau = KnotVector::scalar(&vec![0.0; b.len()]).unwrap();
    match mc_over_simplex(b, &tau, cfg, 1, |u, _, out| out[0] = C64::new(u[j], 0.0)) {
        Ok(est) => {
            let exact = b.w(j);
            rb.complex("exact", exact)
                .complex("estimate", est[0].estimate)
                .finish((est[0].estimate - exact).norm(), 1e-12, Some(est[0].stderr))
        }
        Err(e) => rb.failed(&e),
    }
}

type ScalarFn<'a> = &'a (dyn Fn(f64) -> C64 + Sync);

fn average_scalar(f: ScalarFn, b: &WeightVector, tau: &KnotVector, cfg: McConfig) -> Result<McEstimate> {
    Ok(mc_over_simplex(b, tau, cfg, 1, |_, x, out| out[0] = f(x[0]))?[0])
}

/// `E_b[u_j f(u·τ)] = w_j E_{b+e_j}[f(u·τ)]` and
/// `F(b; τ) = Σ_j w_j F(b + e_j; τ)`.
pub fn weight_shift_check(f: ScalarFn, b: &WeightVector, tau: &KnotVector, j: usize, cfg: McConfig) -> VerificationReport {
    let rb = cfg_params(
        VerificationReport::builder("dirichlet.weight_shift")
            .param("weights", weights_param(b))
            .param("knots", knots_param(tau))
            .param("j", j as u64),
        cfg,
    );
    let run = || -> Result<Vec<Comparison>> {
        if j >= b.len() {
            return Err(Error::InvalidWeights(format!("index {j} out of range")));
        }
        let s = cfg.stream * 64;
        let lhs = mc_over_simplex(b, tau, cfg.with_stream(s), 1, |u, x, out| {
            out[0] = u[j] * f(x[0])
        })?[0];
        let wj = b.w(j);
        let shifted = average_scalar(f, &b.shifted(j), tau, cfg.with_stream(s + 1))?;
        let c1 = Comparison::new(
            "u_j dmu_b = w_j dmu_(b+e_j)",
            (lhs.estimate - wj * shifted.estimate).norm(),
            0.0,
            Some(lhs.stderr.hypot(wj.norm() * shifted.stderr)),
        );
        let base = average_scalar(f, b, tau, cfg.with_stream(s + 2))?;
        let mut sum = C64::new(0.0, 0.0);
        let mut var = base.stderr.powi(2);
        for i in 0..b.len() {
            let e = average_scalar(f, &b.shifted(i), tau, cfg.with_stream(s + 3 + i as u64))?;
            sum += b.w(i) * e.estimate;
            var += (b.w(i).norm() * e.stderr).powi(2);
        }
        let c2 = Comparison::new("F(b) = sum_j w_j F(b+e_j)", (base.estimate - sum).norm(), 0.0, Some(var.sqrt()));
        Ok(vec![c1, c2])
    };
    match run() {
        Ok(c) => rb.finish_worst(c),
        Err(e) => rb.failed(&e),
    }
}

/// For `g(x) = x f(x)`: `G(b; τ) = Σ_j w_j τ^j F(b + e_j; τ)`.
pub fn g_expansion_check(f: ScalarFn, b: &WeightVector, tau: &KnotVector, cfg: McConfig) -> VerificationReport {
    let rb = cfg_params(
        VerificationReport::builder("dirichlet.g_expansion")
            .param("weights", weights_param(b))
            .param("knots", knots_param(tau)),
        cfg,
    );
    let run = || -> Result<Comparison> {
        if tau.dim() != 1 {
            return Err(Error::InvalidKnots("G-expansion needs scalar knots".into()));
        }
        let s = cfg.stream * 64;
        let g = |x: f64| x * f(x);
        let lhs = average_scalar(&g, b, tau, cfg.with_stream(s))?;
        let t = tau.scalars();
        let mut sum = C64::new(0.0, 0.0);
        let mut var = lhs.stderr.powi(2);
        for i in 0..b.len() {
            let e = average_scalar(f, &b.shifted(i), tau, cfg.with_stream(s + 1 + i as u64))?;
            let c = b.w(i) * t[i];
            sum += c * e.estimate;
            var += (c.norm() * e.stderr).powi(2);
        }
        Ok(Comparison::new("G = sum w_j tau_j F(b+e_j)", (lhs.estimate - sum).norm(), 0.0, Some(var.sqrt())))
    };
    match run() {
        Ok(c) => rb.finish_worst(vec![c]),
        Err(e) => rb.failed(&e),
    }
}

/// Permutation invariance, knot merging, and dropping a vanishing weight
/// (as the limit `b_0 → 0+`, by quadrature at `b_0 ∈ {0.1, 0.01}`).
pub fn symmetry_checks(
    f: ScalarFn,
    b: &WeightVector,
    tau: &KnotVector,
    perm: &[usize],
    cfg: McConfig,
) -> VerificationReport {
    let rb = cfg_params(
        VerificationReport::builder("dirichlet.symmetry")
            .param("weights", weights_param(b))
            .param("knots", knots_param(tau))
            .param("permutation", perm.iter().map(|&i| i as u64).collect::<Vec<_>>()),
        cfg,
    );
    let run = || -> Result<Vec<Comparison>> {
        check_lengths(b, tau)?;
        let n = b.len();
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidWeights("not a permutation".into()));
        }
        let s = cfg.stream * 64;
        let base = average_scalar(f, b, tau, cfg.with_stream(s))?;
        let pb = WeightVector::positive(&perm.iter().map(|&i| b.real()[i]).collect::<Vec<_>>())?;
        let permuted = average_scalar(f, &pb, &tau.permuted(perm), cfg.with_stream(s + 1))?;
        let c1 = Comparison::new(
            "permutation",
            (base.estimate - permuted.estimate).norm(),
            0.0,
            Some(base.combined_stderr(&permuted)),
        );
        // split b_1 over a duplicated knot τ^1
        let r = b.real();
        let t = tau.scalars();
        let mut split_b = vec![r[0]];
        let mut split_t = vec![t[0]];
        let k = if n > 1 { 1 } else { 0 };
        for i in 1..n {
            if i == k {
                split_b.extend([0.5 * r[i], 0.5 * r[i]]);
                split_t.extend([t[i], t[i]]);
            } else {
                split_b.push(r[i]);
                split_t.push(t[i]);
            }
        }
        if n == 1 {
            split_b = vec![0.5 * r[0], 0.5 * r[0]];
            split_t = vec![t[0], t[0]];
        }
        let merged = average_scalar(
            f,
            &WeightVector::positive(&split_b)?,
            &KnotVector::scalar(&split_t)?,
            cfg.with_stream(s + 2),
        )?;
        let c2 = Comparison::new(
            "knot merge",
            (base.estimate - merged.estimate).norm(),
            0.0,
            Some(base.combined_stderr(&merged)),
        );
        // zero-weight drop as a limit, by quadrature
        let fq = |x: &[f64]| f(x[0]);
        let exact = average_quadrature(&fq, b, tau)?;
        let extra = t.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0;
        let mut d = Vec::new();
        for b0 in [0.1, 0.01] {
            let mut bb = vec![b0];
            bb.extend(&r);
            let mut tt = vec![extra];
            tt.extend(&t);
            let v = average_quadrature(&fq, &WeightVector::positive(&bb)?, &KnotVector::scalar(&tt)?)?;
            d.push((v - exact).norm());
        }
        let c3 = Comparison::new("zero-weight drop (b0 = 0.01 vs 0.1)", d[1], d[0], None);
        Ok(vec![c1, c2, c3])
    };
    match run() {
        Ok(c) => rb.finish_worst(c),
        Err(e) => rb.failed(&e),
    }
}

/// `(∂^z G(b; ·))(τ) = E[D^z g(u · τ)]` along the diagonal direction.
///
/// The left side applies the derivative to `s ↦ E g(u · τ + s)`, estimated
/// with common samples on a grid of shifts; the right side averages a
/// tabulated `D^z g` over fresh samples.
pub fn frac_interchange_check(
    g: &dyn TestFunction,
    b: &WeightVector,
    tau: &KnotVector,
    z: &FracOrder,
    cfg: McConfig,
) -> VerificationReport {
    let rb = cfg_params(
        VerificationReport::builder("dirichlet.frac_interchange")
            .param("weights", weights_param(b))
            .param("knots", knots_param(tau))
            .complex("z", z.z)
            .param("function", g.describe()),
        cfg,
    );
    let run = || -> Result<(f64, f64, f64, C64)> {
        if tau.dim() != 1 {
            return Err(Error::InvalidKnots("interchange needs scalar knots".into()));
        }
        if !(z.z.re < 2.0) {
            return Err(Error::InvalidOrder {
                value: z.z,
                reason: "interchange check needs 0 < Re z < 2",
            });
        }
        let w = DEFAULT_WINDOW;
        let sign = if z.m % 2 == 1 { -1.0 } else { 1.0 };
        let s = cfg.stream * 64;
        let xs = sample_points(b, tau, cfg.with_stream(s))?;
        let n = xs.len() as f64;
        let m = z.m;
        let mean_deriv = |shift: f64| -> Result<C64> {
            let mut acc = C64::new(0.0, 0.0);
            for x in &xs {
                acc += g.derivative(m, x + shift).ok_or(Error::MissingDerivative(m))?;
            }
            Ok(acc / n)
        };
        let unsigned = if z.is_integer() {
            mean_deriv(0.0)?
        } else {
            let table = tabulate(mean_deriv, 0.0, w + 4.0 / 64.0, 1.0 / 64.0)?;
            right_integral(|t| table.interp(t), z.nu, 0.0, w)?
        };
        let lhs = sign * unsigned;
        let t = tau.scalars();
        let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let dz = if hi > lo {
            tabulate(|x| weyl_derivative(g, z, x, w), lo, hi + 4.0 * TABLE_STEP, TABLE_STEP)?
        } else {
            let v = weyl_derivative(g, z, lo, w)?;
            SampledFunction::new(Grid::new(lo, TABLE_STEP, 2)?, vec![v, v])?
        };
        let rhs = average_scalar(&|x| dz.interp(x), b, tau, cfg.with_stream(s + 1))?;
        let sigma = rhs.stderr * std::f64::consts::SQRT_2;
        Ok(((lhs - rhs.estimate).norm(), sigma, (unsigned - rhs.estimate).norm(), rhs.estimate))
    };
    match run() {
        Ok((d, sigma, unsigned, rhs)) => rb
            .complex("rhs", rhs)
            .param("unsigned_discrepancy", unsigned)
            .note("derivative carries (-1)^m; unsigned_discrepancy omits it")
            .finish(d, 1e-3, Some(sigma)),
        Err(e) => rb.failed(&e),
    }
}
