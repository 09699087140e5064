//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumCast + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal or configuration value into this scalar.
    fn lit(value: f64) -> Self {
        <Self as NumCast>::from(value).expect("f64 value representable in scalar type")
    }

    /// Widens to `f64` for reporting and serialization.
    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }

    fn from_count(count: usize) -> Self {
        <Self as NumCast>::from(count).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub(crate) fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

/// Euclidean norm with scaling against overflow and underflow.
pub(crate) fn norm2<T: Scalar>(x: &[T]) -> T {
    let scale = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let sum = x.iter().fold(T::zero(), |acc, &v| {
        let s = v / scale;
        acc + s * s
    });
    scale * sum.sqrt()
}
