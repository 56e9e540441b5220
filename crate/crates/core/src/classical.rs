//! Classical polynomial B-splines (Cox–de Boor recursion).

/// Normalised B-spline `N_{i,k}` of order `k` (degree `k - 1`) on `knots`.
pub fn basis(knots: &[f64], i: usize, k: usize, x: f64) -> f64 {
    if k == 1 {
        return if knots[i] <= x && x < knots[i + 1] { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    let d1 = knots[i + k - 1] - knots[i];
    if d1 > 0.0 {
        v += (x - knots[i]) / d1 * basis(knots, i, k - 1, x);
    }
    let d2 = knots[i + k] - knots[i + 1];
    if d2 > 0.0 {
        v += (knots[i + k] - x) / d2 * basis(knots, i + 1, k - 1, x);
    }
    v
}

/// Cardinal B-spline of order `n` with knots `0, 1, …, n`.
pub fn cardinal(n: usize, x: f64) -> f64 {
    let knots: Vec<f64> = (0..=n).map(|k| k as f64).collect();
    basis(&knots, 0, n, x)
}

/// B-spline normalised to unit integral (the Curry–Schoenberg `M`-spline)
/// on `knots.len() - 1` intervals. This is the density of `Σ τ_j U_j` for
/// `U` uniform on the simplex.
pub fn m_spline(knots: &[f64], x: f64) -> f64 {
    let n = knots.len() - 1;
    let span = knots[n] - knots[0];
    if span <= 0.0 {
        return 0.0;
    }
    n as f64 / span * basis(knots, 0, n, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_and_quadratic() {
        assert_eq!(cardinal(2, 1.0), 1.0);
        assert_eq!(cardinal(2, 0.5), 0.5);
        assert!((cardinal(3, 1.5) - 0.75).abs() < 1e-15);
        assert!((m_spline(&[0.0, 1.0, 3.0], 1.0) - 2.0 / 3.0).abs() < 1e-15);
    }
}
