//! Floating-point scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the channel and optimizer code is written against.
///
/// Implemented for `f32` and `f64`. Random draws are always produced in
/// `f64` and narrowed, so a given seed yields the same realization (up to
/// rounding) for either precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Distance from the Lorentzian circle (or unit circle) beyond which a
    /// weight is rejected as off-manifold.
    fn manifold_tol() -> Self;

    /// Converts an `f64` constant. Every constant used by this crate is
    /// representable in both precisions, so this never fails.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f64 {
    #[inline]
    fn manifold_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    #[inline]
    fn manifold_tol() -> Self {
        1e-4
    }
}

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
