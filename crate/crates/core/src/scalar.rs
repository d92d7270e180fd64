//! Scalar abstraction for the whole toolkit.
//!
//! All numerics are generic over [`Scalar`]; `f64` is the default used by the
//! type aliases at the crate root. Random draws are always made in `f64` and
//! converted, so sampling streams are identical for every instantiation.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

/* shorthand for lifting literals into the generic scalar */
#[inline]
pub fn fl<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal not representable in scalar type")
}

#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().expect("scalar not representable as f64")
}
