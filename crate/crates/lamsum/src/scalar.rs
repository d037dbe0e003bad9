//! Scalar abstraction: the whole crate is generic over the floating-point
//! type through this trait, with `f64` as the canonical instantiation.

use num_traits::{Float, FloatConst, ToPrimitive};

/// Floating-point scalar (f32 or f64).
pub trait Scalar:
    Float + FloatConst + ToPrimitive + core::fmt::Debug + core::fmt::Display + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + ToPrimitive + core::fmt::Debug + core::fmt::Display + 'static
{
}

/// Converts an `f64` literal into the scalar type.
///
/// Tolerances and calibration constants are specified as `f64` literals;
/// for `f32` they degrade to the nearest representable value.
#[inline]
pub fn lit<S: Scalar>(x: f64) -> S {
    S::from(x).expect("literal not representable in scalar type")
}
