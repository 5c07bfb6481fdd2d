//! Scalar abstractions.
//!
//! Two families of numbers flow through the crate:
//!
//! - [`Real`]: floating-point statistics (empirical conditional probabilities,
//!   discrepancy statistics, thresholds such as `n^{-beta}`). Implemented for
//!   `f32` and `f64`.
//! - [`Field`]: model-side probabilities used by the exact oracles. Implemented
//!   for `f32`, `f64` (tolerance-based zero test) and [`BigRational`] (exact).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Floating point scalar used by the estimators.
pub trait Real: Float + FromPrimitive + Debug + Default + Send + Sync + 'static {
    fn from_count(c: usize) -> Self {
        Self::from_usize(c).expect("count representable as float")
    }

    fn ratio(num: usize, den: usize) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A field of probabilities with a notion of "numerically zero".
pub trait Field:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static
{
    /// True when the value must be treated as exactly zero.
    fn negligible(&self) -> bool;

    fn from_ratio(num: u64, den: u64) -> Self;

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Field for f64 {
    fn negligible(&self) -> bool {
        self.abs() <= 1e-12
    }

    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }
}

impl Field for f32 {
    fn negligible(&self) -> bool {
        self.abs() <= 1e-6
    }

    fn from_ratio(num: u64, den: u64) -> Self {
        (num as f64 / den as f64) as f32
    }
}

impl Field for BigRational {
    fn negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// `2^{-k}` in any field.
pub fn pow2_neg<T: Field>(k: u32) -> T {
    let mut x = T::one();
    let half = T::from_ratio(1, 2);
    for _ in 0..k {
        x = x * half.clone();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_zero_is_exact() {
        let a = BigRational::from_ratio(1, 3);
        let b = BigRational::from_ratio(2, 6);
        assert!((a.clone() - b).negligible());
        assert!(!(a - BigRational::from_ratio(1, 4)).negligible());
    }

    #[test]
    fn float_zero_is_tolerant() {
        assert!((0.1f64 + 0.2 - 0.3).negligible());
        assert!(!(1e-9f64).negligible());
    }

    #[test]
    fn pow2() {
        assert_eq!(pow2_neg::<BigRational>(3), BigRational::from_ratio(1, 8));
        assert_eq!(pow2_neg::<f64>(2), 0.25);
    }
}
