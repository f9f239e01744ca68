//! Scalar abstraction over the floating-point type.
//!
//! All geometric and analytic routines are generic over [`Scalar`] so they can
//! run in `f32` or `f64`. The default tolerances are tuned for `f64`; with
//! `f32` they must be relaxed by the caller or most iterations will stall on
//! rounding noise.

use std::fmt::Debug;

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the library is generic over.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Conversion from an `f64` constant (exact for `f64`, rounded for `f32`).
    fn of(x: f64) -> Self;

    /// Widening view used for error reporting and caching.
    fn as_f64(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}
