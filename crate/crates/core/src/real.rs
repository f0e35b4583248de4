//! Scalar abstraction for log2-domain costs.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating point type used for index sizes and costs: `f32` or `f64`.
///
/// Every size and cost in this crate lives in the log2 domain, so products
/// become sums and the only transcendental operation needed is [`log_sum`].
pub trait Real:
    Float + FromPrimitive + NumCast + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; used for literals and file input.
    fn of(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 is representable")
    }

    fn of_usize(x: usize) -> Self {
        <Self as NumCast>::from(x).expect("usize is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite or infinite float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `log2(2^a + 2^b)` evaluated without leaving the log domain.
///
/// `-inf` is the additive identity (zero in the linear domain).
pub fn log_sum<T: Real>(a: T, b: T) -> T {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == T::neg_infinity() {
        return hi;
    }
    hi + (lo - hi).exp2().ln_1p() / T::of(std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_of_powers_of_two() {
        assert_eq!(log_sum(3.0f64, 3.0), 4.0);
        assert!((log_sum(1.0f64, 0.0) - 3f64.log2()).abs() < 1e-15);
        assert_eq!(log_sum(5.0f64, f64::NEG_INFINITY), 5.0);
        assert_eq!(
            log_sum(f64::NEG_INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn log_sum_never_below_max() {
        for &(a, b) in &[(60.0f64, 1.0), (0.0, -1074.0), (1e3, 1e3 - 1e-9)] {
            assert!(log_sum(a, b) >= a.max(b));
        }
        assert!(log_sum(10.0f32, 9.0) >= 10.0);
    }
}
