//! Complex gamma function and friends.
//!
//! Lanczos approximation with g = 7 and nine coefficients, reflection for
//! `Re z < 0.5`.

use std::f64::consts::PI;

use crate::{Error, Result, C64};

const G: f64 = 7.0;
const P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const POLE_TOL: f64 = 1e-12;

/// Log of the Lanczos form, valid for `Re z >= 0.5`.
fn ln_gamma_lanczos(z: C64) -> C64 {
    let z = z - 1.0;
    let mut x = C64::new(P[0], 0.0);
    for (i, p) in P.iter().enumerate().skip(1) {
        x += *p / (z + i as f64);
    }
    let t = z + G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// Distance from `z` to the nearest nonpositive integer, or `None` when the
/// nearest integer is positive.
fn pole_distance(z: C64) -> Option<f64> {
    let n = z.re.round();
    if n > 0.0 {
        return None;
    }
    Some((z - n).norm())
}

/// `sin(pi z)`, with the integer part removed first so that integers give
/// exact zeros.
pub fn sin_pi(z: C64) -> C64 {
    let n = z.re.round();
    let s = (PI * (z - n)).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Euler's gamma function.
pub fn gamma(z: C64) -> Result<C64> {
    if let Some(d) = pole_distance(z) {
        if d <= POLE_TOL {
            return Err(Error::Pole(z));
        }
    }
    if z.re < 0.5 {
        let g = gamma(1.0 - z)?;
        Ok(PI / (sin_pi(z) * g))
    } else {
        Ok(ln_gamma_lanczos(z).exp())
    }
}

/// A logarithm of `Γ(z)`. The branch is not normalised; only `exp` of the
/// result (and of sums of such logs) is meaningful.
pub fn ln_gamma(z: C64) -> Result<C64> {
    if let Some(d) = pole_distance(z) {
        if d <= POLE_TOL {
            return Err(Error::Pole(z));
        }
    }
    if z.re < 0.5 {
        Ok(C64::new(PI.ln(), 0.0) - sin_pi(z).ln() - ln_gamma(1.0 - z)?)
    } else {
        Ok(ln_gamma_lanczos(z))
    }
}

/// Reciprocal gamma function, entire; zero at the poles of `Γ`.
pub fn rgamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let w = 1.0 - z;
        sin_pi(z) * ln_gamma_lanczos(w).exp() / PI
    } else {
        (-ln_gamma_lanczos(z)).exp()
    }
}

/// `1 / (Γ(z - k + 1) Γ(k + 1))` without intermediate overflow for large `k`.
pub fn rgamma_pair(z: C64, k: usize) -> C64 {
    let kf = k as f64;
    if k < 100 {
        return rgamma(z - kf + 1.0) * rgamma(C64::new(kf + 1.0, 0.0));
    }
    let w = z - kf + 1.0;
    if w.re >= 0.5 {
        return (-ln_gamma_lanczos(w) - ln_gamma_lanczos(C64::new(kf + 1.0, 0.0))).exp();
    }
    // 1/Γ(w) = sin(πw) Γ(1-w) / π
    let l = ln_gamma_lanczos(1.0 - w) - ln_gamma_lanczos(C64::new(kf + 1.0, 0.0));
    sin_pi(w) * l.exp() / PI
}

/// Generalised binomial coefficient `Γ(z+1) / (Γ(z-k+1) Γ(k+1))`.
pub fn binom(z: C64, k: usize) -> C64 {
    let integer = z.im == 0.0 && z.re.fract() == 0.0;
    if integer && z.re >= 0.0 && (k as f64) > z.re {
        return C64::new(0.0, 0.0);
    }
    if k <= 256 || integer {
        let mut c = C64::new(1.0, 0.0);
        for j in 0..k {
            c *= (z - j as f64) / (j as f64 + 1.0);
        }
        return c;
    }
    // Γ(z+1) sin(π(z-k+1)) Γ(k-z) / (π k!)
    let kf = k as f64;
    let l = ln_gamma(z + 1.0).unwrap_or(C64::new(f64::NEG_INFINITY, 0.0))
        + ln_gamma_lanczos(kf - z)
        - ln_gamma_lanczos(C64::new(kf + 1.0, 0.0));
    sin_pi(z - kf + 1.0) * l.exp() / PI
}

/// Truncated power `x_+^w`.
pub fn trunc_pow(x: f64, w: C64) -> Result<C64> {
    if x < 0.0 {
        Ok(C64::new(0.0, 0.0))
    } else if x > 0.0 {
        Ok((w * x.ln()).exp())
    } else if w.re > 0.0 {
        Ok(C64::new(0.0, 0.0))
    } else if w == C64::new(0.0, 0.0) {
        Ok(C64::new(1.0, 0.0))
    } else {
        Err(Error::SingularAtZero(w))
    }
}

/// Fractional integration kernel `K_z(x) = x_+^{z-1} / Γ(z)`.
pub fn kernel_k(z: C64, x: f64) -> Result<C64> {
    if z.re <= 0.0 {
        return Err(Error::InvalidOrder {
            value: z,
            reason: "kernel requires Re z > 0",
        });
    }
    Ok(trunc_pow(x, z - 1.0)? * rgamma(z))
}
