use crate::C64;

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: C64,
    comp: C64,
    abs: f64,
}

#[inline]
fn two_sum(s: f64, c: &mut f64, x: f64) -> f64 {
    let t = s + x;
    if s.abs() >= x.abs() {
        *c += (s - t) + x;
    } else {
        *c += (x - t) + s;
    }
    t
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: C64) {
        self.sum.re = two_sum(self.sum.re, &mut self.comp.re, x.re);
        self.sum.im = two_sum(self.sum.im, &mut self.comp.im, x.im);
        self.abs += x.norm();
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }

    /// Sum of the magnitudes of all added terms.
    pub fn abs_sum(&self) -> f64 {
        self.abs
    }
}

/// Pairwise summation in a fixed order.
pub fn pairwise(xs: &[C64]) -> C64 {
    match xs.len() {
        0 => C64::new(0.0, 0.0),
        1 => xs[0],
        n if n <= 8 => xs.iter().fold(C64::new(0.0, 0.0), |a, b| a + b),
        n => pairwise(&xs[..n / 2]) + pairwise(&xs[n / 2..]),
    }
}

pub fn pairwise_f64(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        n if n <= 8 => xs.iter().sum(),
        n => pairwise_f64(&xs[..n / 2]) + pairwise_f64(&xs[n / 2..]),
    }
}
