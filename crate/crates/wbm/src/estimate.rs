//! A value paired with an absolute error bound, with first-order propagation.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Numerical value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Self {
            value,
            error: error.abs(),
        }
    }

    /// A value known to working precision.
    pub fn exact(value: f64) -> Self {
        Self::new(value, 4.0 * f64::EPSILON * value.abs())
    }

    /// Applies a scalar function given its derivative at the value.
    pub fn map(self, f: impl Fn(f64) -> f64, df: f64) -> Self {
        Self::new(f(self.value), df.abs() * self.error)
    }

    pub fn scale(self, t: f64) -> Self {
        Self::new(t * self.value, t.abs() * self.error)
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            self.error
        } else {
            self.error / self.value.abs()
        }
    }
}

impl From<f64> for Estimate {
    fn from(value: f64) -> Self {
        Self::exact(value)
    }
}

impl Div for Estimate {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        let v = self.value / rhs.value;
        let e = (self.error + v.abs() * rhs.error) / rhs.value.abs();
        Self::new(v, e)
    }
}

impl Add for Estimate {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.error + rhs.error)
    }
}

impl Sub for Estimate {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.error + rhs.error)
    }
}

impl Mul for Estimate {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.value * rhs.value,
            self.value.abs() * rhs.error + rhs.value.abs() * self.error + self.error * rhs.error,
        )
    }
}

impl Neg for Estimate {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.error)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_error_is_first_order() {
        let a = Estimate::new(2.0, 0.01);
        let b = Estimate::new(3.0, 0.02);
        let p = a * b;
        assert_eq!(p.value, 6.0);
        assert!((p.error - (2.0 * 0.02 + 3.0 * 0.01 + 0.0002)).abs() < 1e-15);
    }

    #[test]
    fn quotient_propagates_both_errors() {
        let q = Estimate::new(1.0, 0.1) / Estimate::new(2.0, 0.2);
        assert_eq!(q.value, 0.5);
        assert!((q.error - 0.1).abs() < 1e-15);
    }
}
