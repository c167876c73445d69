use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type the whole library is generic over.
///
/// Implemented for `f32` and `f64`; everything needed is inherited from
/// `num-traits` plus formatting bounds for diagnostics.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Shorthand for lifting an `f64` constant into the scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant not representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
