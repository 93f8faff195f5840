//! Scalar abstraction: every numerical routine in this crate is generic over
//! a floating-point type implementing [`Real`].

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Signed
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Signed
        + Sum
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for converting an `f64` literal into `T`.
#[inline]
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant representable in scalar type")
}

/// Shorthand for converting a `usize` count into `T`.
#[inline]
pub(crate) fn real_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize representable in scalar type")
}

/// Shorthand for converting a `u64` count into `T`.
#[inline]
pub(crate) fn real_u64<T: Real>(n: u64) -> T {
    T::from_u64(n).expect("u64 representable in scalar type")
}

/// Validation tolerance scaled to the precision of `T`.
///
/// `f64` gets the documented 1e-12; wider tolerances apply to narrower types
/// so the same invariant checks stay meaningful in `f32`.
#[inline]
pub(crate) fn mass_tolerance<T: Real>() -> T {
    real::<T>(1e-12).max(T::epsilon() * real(32.0))
}
