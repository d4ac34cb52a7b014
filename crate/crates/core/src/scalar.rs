//! Floating-point scalar abstraction used throughout the crate.
//!
//! All dynamics are written against [`Scalar`] so the same formulas run in
//! `f32` or `f64`; the crate root exports `f64` aliases for the common case.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Signed};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Signed + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + Signed + Debug + Display + Send + Sync + 'static
{
}

/// Convert an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must convert to the scalar type")
}

/// Tolerance for constructor consistency checks.
///
/// 1e-12 relative in f64; widens to a few epsilon for narrower scalars.
#[inline]
pub(crate) fn consistency_tol<T: Scalar>() -> T {
    lit::<T>(1e-12).max(T::epsilon() * lit::<T>(8.0))
}
