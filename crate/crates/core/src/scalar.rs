//! Floating-point scalar abstraction.
//!
//! Every numerical routine in this crate is generic over [`Scalar`], so the
//! same code runs in `f32` and `f64`. The crate root exports `f64` aliases
//! for the common types; `f64` is the precision all default tolerances are
//! calibrated for.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar type: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Display + Debug + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + NumAssign + Sum + Display + Debug + Send + Sync + 'static
{
}

/// Casts an `f64` constant into the scalar type.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}
