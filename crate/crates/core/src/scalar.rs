//! Scalar abstraction shared by every numeric kernel in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type the analytic kernels and samplers are generic over.
///
/// Implemented for `f32` and `f64`. Accuracy contracts quoted in the docs
/// refer to `f64`; the `f32` instantiation carries single-precision accuracy.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` constant into this type.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi<T: Real>(x: T) -> T {
    let n = x.round();
    let r = x - n;
    let s = (T::PI() * r).sin();
    // sin(pi (n + r)) = (-1)^n sin(pi r)
    let odd = (n / T::c(2.0)).fract() != T::zero();
    if odd {
        -s
    } else {
        s
    }
}

/// `cos(pi x)` with exact zeros at the half-integers.
pub fn cos_pi<T: Real>(x: T) -> T {
    sin_pi(x + T::c(0.5))
}

/// Two-sum compensated accumulator (Neumaier variant).
#[derive(Debug, Clone, Copy)]
pub struct Compensated<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Default for Compensated<T> {
    fn default() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }
}

impl<T: Real> Compensated<T> {
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for n in -5..=5 {
            assert_eq!(sin_pi(n as f64), 0.0);
        }
        assert!((sin_pi(0.5f64) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-1.5f64) - 1.0).abs() < 1e-16);
        assert!((sin_pi(2.25f64) - (std::f64::consts::PI * 0.25).sin()).abs() < 1e-15);
    }

    #[test]
    fn cos_pi_half_integers() {
        assert_eq!(cos_pi(0.5f64), 0.0);
        assert!((cos_pi(1.0f64) + 1.0).abs() < 1e-16);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = Compensated::<f64>::default();
        acc.add(1e16);
        for _ in 0..10 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 10.0);
    }
}
