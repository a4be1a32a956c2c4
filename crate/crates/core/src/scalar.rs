//! Exact integer scalars.
//!
//! Every computation in the crate is exact. The library is generic over the
//! integer type so callers can trade speed for range: `i64`/`i128` are fast
//! but panic on overflow in debug builds, while [`num_bigint::BigInt`] never
//! overflows. The crate-root aliases all use `BigInt`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer usable as a coefficient, dimension or intersection number.
pub trait Scalar:
    Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Debug
    + Display
    + Hash
    + Send
    + Sync
    + 'static
{
    /// Lossless conversion from a small machine integer.
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every supported scalar holds an i64")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Debug
        + Display
        + Hash
        + Send
        + Sync
        + 'static
{
}

/// `max(0, v)`.
pub(crate) fn clamp_nonneg<T: Scalar>(v: T) -> T {
    if v.is_negative() {
        T::zero()
    } else {
        v
    }
}
