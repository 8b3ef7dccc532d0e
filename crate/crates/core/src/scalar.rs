//! Scalar abstraction: the crate is generic over the floating-point type.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable throughout the crate (f32 or f64).
pub trait Real:
    Float + FromPrimitive + Sum<Self> + Debug + Display + LowerExp + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FromPrimitive + Sum<Self> + Debug + Display + LowerExp + Send + Sync + 'static
{
}

/// Shorthand for lifting an `f64` constant into the generic scalar.
#[inline]
pub(crate) fn cst<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

/// x·ln(x/y) with the 0·log 0 = 0 convention.
#[inline]
pub(crate) fn xlog_ratio<T: Real>(x: T, y: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * (x / y).ln()
    }
}

/// Binary entropy −x ln x − (1−x) ln(1−x) in nats, with 0·log 0 = 0.
#[inline]
pub(crate) fn binary_entropy_impl<T: Real>(x: T) -> T {
    let one = T::one();
    let mut h = T::zero();
    if x > T::zero() {
        h = h - x * x.ln();
    }
    if x < one {
        h = h - (one - x) * (one - x).ln();
    }
    h
}
