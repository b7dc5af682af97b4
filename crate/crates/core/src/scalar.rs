//! Floating point scalar abstraction: the geometric and statistical parts of
//! the crate are generic over `f32`/`f64`; word arithmetic stays exact.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lift an `f64` constant into the scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// Lift a `usize` (sample counts, grid sizes).
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits scalar")
    }

    /// Lower to `f64` for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar fits f64")
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
