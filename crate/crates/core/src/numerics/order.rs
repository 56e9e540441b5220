//! Validated complex orders.

use crate::{Error, Result, C64};

/// A complex order with a checked lower bound on its real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexOrder(C64);

impl ComplexOrder {
    /// Order of a fractional operator, `Re z > 0`.
    pub fn fractional(z: C64) -> Result<Self> {
        if z.re > 0.0 && z.re.is_finite() && z.im.is_finite() {
            Ok(Self(z))
        } else {
            Err(Error::InvalidOrder {
                value: z,
                reason: "fractional order needs Re z > 0",
            })
        }
    }

    /// Order of a spline, `Re z > 1`.
    pub fn spline(z: C64) -> Result<Self> {
        if z.re > 1.0 && z.re.is_finite() && z.im.is_finite() {
            Ok(Self(z))
        } else {
            Err(Error::InvalidOrder {
                value: z,
                reason: "spline order needs Re z > 1",
            })
        }
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    /// `Some(n)` when the order is exactly the positive integer `n`.
    pub fn as_integer(&self) -> Option<u32> {
        as_integer(self.0)
    }
}

pub(crate) fn as_integer(z: C64) -> Option<u32> {
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re > 0.0 && z.re < 1e6 {
        Some(z.re as u32)
    } else {
        None
    }
}

/// A fractional-derivative order split as `z = m - ν`.
///
/// Normally `m = ⌈Re z⌉`. When `Re z` is an integer but `Im z ≠ 0` the kernel
/// `t^{ν-1}` with `Re ν = 0` is not integrable, so `m` is raised by one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    pub z: C64,
    pub m: u32,
    pub nu: C64,
}

impl FracOrder {
    pub fn new(z: C64) -> Result<Self> {
        let z = ComplexOrder::fractional(z)?.value();
        let mut m = z.re.ceil();
        if z.re.fract() == 0.0 && z.im != 0.0 {
            m += 1.0;
        }
        Ok(Self {
            z,
            m: m as u32,
            nu: C64::new(m, 0.0) - z,
        })
    }

    /// True when `ν = 0`, i.e. `z` is a positive integer.
    pub fn is_integer(&self) -> bool {
        self.nu == C64::new(0.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert!(ComplexOrder::spline(C64::new(1.0, 3.0)).is_err());
        assert!(ComplexOrder::fractional(C64::new(0.0, 1.0)).is_err());
        let f = FracOrder::new(C64::new(0.5, 0.5)).unwrap();
        assert_eq!(f.m, 1);
        assert_eq!(f.nu, C64::new(0.5, -0.5));
        let f = FracOrder::new(C64::new(2.0, 0.0)).unwrap();
        assert!(f.is_integer());
        let f = FracOrder::new(C64::new(2.0, 1.0)).unwrap();
        assert_eq!(f.m, 3);
        assert_eq!(f.nu.re, 1.0);
    }
}
