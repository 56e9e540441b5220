//! Uniform grids and functions sampled on them.

use std::str::FromStr;

use crate::{Error, Result, C64};

/// Uniform grid `start + i * step`, `i < count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("count must be at least 2, got {count}")));
        }
        Ok(Self { start, step, count })
    }

    /// Grid from `start` to `end` (inclusive, up to rounding) with the given step.
    pub fn span(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(end > start) {
            return Err(Error::InvalidGrid(format!("empty range {start}:{end}")));
        }
        if !(step > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        let n = ((end - start) / step + 1e-9).floor() as usize + 1;
        Self::new(start, step, n)
    }

    pub fn start(&self) -> f64 {
        self.start
    }
    pub fn step(&self) -> f64 {
        self.step
    }
    pub fn count(&self) -> usize {
        self.count
    }
    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }
    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// Parses `start:end:step`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Usage(format!("grid must be start:end:step, got '{s}'")));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("bad number '{t}' in grid '{s}'")))
        };
        Grid::span(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

/// Complex samples on a grid, with cubic interpolation in between.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<C64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.count()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> C64>(grid: Grid, f: F) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Four-point Lagrange interpolation; zero outside the grid.
    pub fn interp(&self, x: f64) -> C64 {
        let g = &self.grid;
        let s = (x - g.start) / g.step;
        let n = g.count;
        if !(s >= 0.0) || s > (n - 1) as f64 {
            return C64::new(0.0, 0.0);
        }
        if n < 4 {
            let i = (s.floor() as usize).min(n - 2);
            let t = s - i as f64;
            return self.values[i] * (1.0 - t) + self.values[i + 1] * t;
        }
        let i = (s.floor() as usize).clamp(1, n - 3);
        let t = s - i as f64;
        let v = &self.values[i - 1..i + 3];
        let l0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let l1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let l2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let l3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        v[0] * l0 + v[1] * l1 + v[2] * l2 + v[3] * l3
    }

    /// Trapezoid integral over the grid.
    pub fn integral(&self) -> C64 {
        let v = &self.values;
        let inner: C64 = v[1..v.len() - 1].iter().sum();
        (inner + (v[0] + v[v.len() - 1]) * 0.5) * self.grid.step
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let g: Grid = "0:4:0.5".parse().unwrap();
        assert_eq!(g.count(), 9);
        assert_eq!(g.end(), 4.0);
        assert!("0:4".parse::<Grid>().is_err());
        assert!("0:4:-1".parse::<Grid>().is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn cubic_interpolation_is_exact_on_cubics() {
        let g = Grid::new(-1.0, 0.25, 17).unwrap();
        let f = |x: f64| C64::new(x * x * x - 2.0 * x, 0.5 * x * x);
        let s = SampledFunction::from_fn(g, f);
        for x in [-0.9, -0.13, 0.77, 2.3, 2.99] {
            assert!((s.interp(x) - f(x)).norm() < 1e-13);
        }
        assert_eq!(s.interp(3.5), C64::new(0.0, 0.0));
    }
}
