//! Splines with general weights and knots (Dirichlet splines).
//!
//! For positive weights `b` and knots `τ` the spline `B_z(· | b; τ)` is
//! characterised by `∫ B_z(t | b; τ) D^z g(t) dt = E[D^z g(u · τ)]`. It is
//! realised here as the law of `X = u · τ`, estimated with a Gaussian kernel
//! density estimate.

use rayon::prelude::*;

use crate::classical::m_spline;
use crate::dirichlet::{average_quadrature, sample_points, KnotVector, WeightVector, MAX_QUADRATURE_DIM};
use crate::fractional::{weyl_derivative, DEFAULT_WINDOW};
use crate::numerics::gamma::{gamma, rgamma};
use crate::numerics::quadrature::{integrate, QuadOptions};
use crate::numerics::{ComplexOrder, FracOrder, Grid, McConfig, SampledFunction, TestFunction};
use crate::report::{Comparison, VerificationReport};
use crate::{Error, Result, C64};

/// Minimum sample count for a density estimate.
pub const MIN_SAMPLES: usize = 10_000;
const KERNEL_CUTOFF: f64 = 8.0;

/// A density estimate of `X = u · τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub density: SampledFunction,
    pub bandwidth: f64,
    pub samples: usize,
}

/// Silverman's rule `0.9 min(σ, IQR/1.34) n^{-1/5}` on sorted data.
pub fn silverman(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let var = sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let q = |p: f64| sorted[((p * (n - 1.0)).round() as usize).min(sorted.len() - 1)];
    let iqr = q(0.75) - q(0.25);
    let spread = if iqr > 0.0 { var.sqrt().min(iqr / 1.34) } else { var.sqrt() };
    0.9 * spread * n.powf(-0.2)
}

/// Gaussian kernel density estimate on `grid` from sorted samples.
pub fn kde(sorted: &[f64], h: f64, grid: Grid) -> SampledFunction {
    let norm = 1.0 / (sorted.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let vals: Vec<C64> = (0..grid.count())
        .into_par_iter()
        .map(|i| {
            let x = grid.point(i);
            let lo = sorted.partition_point(|s| *s < x - KERNEL_CUTOFF * h);
            let hi = sorted.partition_point(|s| *s <= x + KERNEL_CUTOFF * h);
            let s: f64 = sorted[lo..hi]
                .iter()
                .map(|s| (-0.5 * ((x - s) / h).powi(2)).exp())
                .sum();
            C64::new(s * norm, 0.0)
        })
        .collect();
    SampledFunction::new(grid, vals).expect("grid and values agree")
}

/// Kernel bandwidth selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// A multiple of Silverman's rule.
    Silverman(f64),
    Fixed(f64),
}

impl Default for Bandwidth {
    fn default() -> Self {
        Bandwidth::Silverman(1.0)
    }
}

/// Estimates the law of `u · τ` on a grid covering the knots.
pub fn estimate_density(
    weights: &WeightVector,
    knots: &KnotVector,
    cfg: McConfig,
    bandwidth: Bandwidth,
) -> Result<DensityEstimate> {
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::Usage(format!(
            "density estimation needs at least {MIN_SAMPLES} samples"
        )));
    }
    if knots.dim() != 1 {
        return Err(Error::InvalidKnots("density estimation needs scalar knots".into()));
    }
    let mut xs = sample_points(weights, knots, cfg)?;
    xs.sort_by(f64::total_cmp);
    let t = knots.scalars();
    let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let h = match bandwidth {
        Bandwidth::Fixed(h) | Bandwidth::Silverman(h) if !(h > 0.0 && h.is_finite()) => {
            return Err(Error::Usage(format!("bandwidth parameter must be positive, got {h}")))
        }
        Bandwidth::Fixed(h) => h,
        Bandwidth::Silverman(k) => {
            let h = k * silverman(&xs);
            if h > 0.0 {
                h
            } else {
                1e-3 * span.max(1.0)
            }
        }
    };
    let width = span + 8.0 * h;
    let count = ((width / (h / 8.0)).ceil() as usize).clamp(200, 4000);
    let grid = Grid::new(lo - 4.0 * h, width / (count - 1) as f64, count)?;
    Ok(DensityEstimate {
        density: kde(&xs, h, grid),
        bandwidth: h,
        samples: xs.len(),
    })
}

/// A complex-order spline with weights `b` and knots `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpline {
    order: ComplexOrder,
    weights: WeightVector,
    knots: KnotVector,
    estimate: DensityEstimate,
}

impl WeightedSpline {
    pub fn new(
        z: C64,
        weights: WeightVector,
        knots: KnotVector,
        cfg: McConfig,
        bandwidth: Bandwidth,
    ) -> Result<Self> {
        let order = ComplexOrder::spline(z)?;
        let t = knots.scalars();
        if knots.dim() != 1 || t[0] != 0.0 || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidKnots(
                "knots must be scalar, strictly increasing and start at 0".into(),
            ));
        }
        let estimate = estimate_density(&weights, &knots, cfg, bandwidth)?;
        Ok(Self {
            order,
            weights,
            knots,
            estimate,
        })
    }

    pub fn order(&self) -> C64 {
        self.order.value()
    }
    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }
    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }
    pub fn density(&self) -> &SampledFunction {
        &self.estimate.density
    }
    pub fn bandwidth(&self) -> f64 {
        self.estimate.bandwidth
    }
    /// The growth proxy `max ‖τ^k‖^{1/k}` is below `e`.
    pub fn growth_below_e(&self) -> bool {
        self.knots.growth_proxy < std::f64::consts::E
    }
}

/// `∫ B_z(t | b; τ) D^z g(t) dt = E[D^z g(u · τ)]`, with the signed derivative.
pub fn defining_identity_check(spline: &WeightedSpline, g: &dyn TestFunction, cfg: McConfig) -> VerificationReport {
    let z = spline.order();
    let rb = VerificationReport::builder("weighted.defining_identity")
        .complex("z", z)
        .param("weights", spline.weights().real())
        .param("knots", spline.knots().scalars())
        .param("function", g.describe())
        .param("bandwidth", spline.bandwidth())
        .param("samples", cfg.samples as u64)
        .param("seed", cfg.seed)
        .param("growth_below_e", spline.growth_below_e());
    let run = || -> Result<(C64, C64, f64)> {
        let fo = FracOrder::new(z)?;
        let grid = *spline.density().grid();
        let dz = crate::fractional::tabulate(
            |t| weyl_derivative(g, &fo, t, DEFAULT_WINDOW),
            grid.start(),
            grid.end() + 0.5 * grid.step(),
            grid.step(),
        )?;
        let prod: Vec<C64> = spline
            .density()
            .values()
            .iter()
            .zip(dz.values())
            .map(|(d, w)| d * w)
            .collect();
        let lhs = SampledFunction::new(grid, prod)?.integral();
        let xs = sample_points(spline.weights(), spline.knots(), cfg.with_stream(cfg.stream * 64 + 1))?;
        let n = xs.len() as f64;
        let vals: Vec<C64> = xs.iter().map(|x| dz.interp(*x)).collect();
        let mean: C64 = vals.iter().sum::<C64>() / n;
        let var = vals.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
        Ok((lhs, mean, (var / n).sqrt()))
    };
    match run() {
        Ok((l, r, s)) => rb
            .complex("lhs", l)
            .complex("rhs", r)
            .note("left side integrates the kernel density estimate; tolerance 2% of |rhs| covers its bias")
            .finish((l - r).norm(), 2e-2 * r.norm(), Some(s)),
        Err(e) => rb.failed(&e),
    }
}

fn beta_pdf(v: f64, a: f64, b: f64) -> f64 {
    if !(v > 0.0 && v < 1.0) {
        return 0.0;
    }
    let ln = (a - 1.0) * v.ln() + (b - 1.0) * (1.0 - v).ln();
    let norm = (gamma(C64::new(a + b, 0.0)).unwrap() * rgamma(C64::new(a, 0.0)) * rgamma(C64::new(b, 0.0))).re;
    norm * ln.exp()
}

/// Density of `u · τ` at `x` by conditioning on `u_0`, for at most four
/// knots: `X = u_0 τ^0 + (1 - u_0) Y` with `u_0 ~ Beta(b_0, Σ_{j>0} b_j)`.
pub fn brute_force_density(b: &[f64], t: &[f64], x: f64) -> Result<f64> {
    if b.len() != t.len() || b.len() < 2 {
        return Err(Error::InvalidKnots("need at least two knots with matching weights".into()));
    }
    if b.len() - 1 > MAX_QUADRATURE_DIM {
        return Err(Error::DimensionTooHigh(b.len() - 1));
    }
    if b.len() == 2 {
        let w = t[1] - t[0];
        if w == 0.0 {
            return Err(Error::InvalidKnots("coincident knots have no density".into()));
        }
        return Ok(beta_pdf((x - t[0]) / w, b[1], b[0]) / w.abs());
    }
    let rest: f64 = b[1..].iter().sum();
    let mut breaks = vec![0.0, 1.0];
    for tj in &t[1..] {
        if *tj != t[0] {
            let v = (x - tj) / (t[0] - tj);
            if v > 0.0 && v < 1.0 {
                breaks.push(v);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let v = integrate(
        |v| {
            let y = (x - v * t[0]) / (1.0 - v);
            let inner = brute_force_density(&b[1..], &t[1..], y).unwrap_or(0.0);
            C64::new(beta_pdf(v, b[0], rest) * inner / (1.0 - v), 0.0)
        },
        &breaks,
        QuadOptions::with_tol(1e-8, 1e-10),
    )?;
    Ok(v.re)
}

/// Compares the density estimate at integer order with the classical
/// B-spline (unit weights) or the conditional-quadrature density (other
/// weights), away from the knots where the estimate is smoothed. A sup-norm
/// comparison wants more smoothing than Silverman's rule; twice that
/// bandwidth is a good default here.
pub fn dirichlet_spline_integer_check(
    weights: &WeightVector,
    knots: &KnotVector,
    n: u32,
    cfg: McConfig,
    bandwidth: Bandwidth,
) -> VerificationReport {
    let rb = VerificationReport::builder("weighted.dirichlet_integer")
        .param("weights", weights.real())
        .param("knots", knots.scalars())
        .param("n", n)
        .param("samples", cfg.samples as u64)
        .param("seed", cfg.seed);
    let run = || -> Result<(f64, f64, usize, f64)> {
        let b = weights.real();
        let t = knots.scalars();
        let total: f64 = b.iter().sum();
        if (total - 1.0 - n as f64).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!(
                "order {n} needs weights summing to {}",
                n + 1
            )));
        }
        let unit = b.iter().all(|x| *x == 1.0);
        if !unit && b.len() - 1 > MAX_QUADRATURE_DIM {
            return Err(Error::DimensionTooHigh(b.len() - 1));
        }
        let est = estimate_density(weights, knots, cfg, bandwidth)?;
        let h = est.bandwidth;
        let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let grid = est.density.grid();
        let mut worst = 0.0f64;
        let mut used = 0;
        for (i, x) in grid.points().enumerate() {
            if x < lo || x > hi || t.iter().any(|k| (x - k).abs() < 3.0 * h) {
                continue;
            }
            let exact = if unit { m_spline(&t, x) } else { brute_force_density(&b, &t, x)? };
            worst = worst.max((est.density.values()[i].re - exact).abs());
            used += 1;
        }
        let mass = est.density.integral().re;
        Ok((worst, h, used, mass))
    };
    match run() {
        Ok((d, h, used, mass)) => rb
            .param("bandwidth", h)
            .param("points_compared", used as u64)
            .param("total_mass", mass)
            .note("compared at grid points at least 3 bandwidths from every knot")
            .finish_worst(vec![
                Comparison::new("sup error", d, 0.03, None),
                Comparison::new("unit mass", (mass - 1.0).abs(), 0.01, None),
            ])
            .require(used > 0, "no comparison points"),
        Err(e) => rb.failed(&e),
    }
}

/// Weighted average over the simplex by quadrature, re-exported for the
/// defining identity at small dimensions.
pub fn quadrature_average(g: &dyn Fn(f64) -> C64, weights: &WeightVector, knots: &KnotVector) -> Result<C64> {
    average_quadrature(&|x: &[f64]| g(x[0]), weights, knots)
}
