use std::fmt::{Debug, Display};
use std::iter::Sum;

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Scalar type the metric stack is generic over: `f32` or `f64`.
pub trait Float:
    num_traits::Float
    + num_traits::FromPrimitive
    + Sum
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
}

impl Float for f32 {}
impl Float for f64 {}

/// Infallible for float targets; counts in this domain are desk scale.
pub(crate) fn from_u64<F: Float>(value: u64) -> F {
    F::from_u64(value).expect("u64 converts to float")
}

pub(crate) fn from_usize<F: Float>(value: usize) -> F {
    F::from_usize(value).expect("usize converts to float")
}
