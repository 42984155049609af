//! Scalar abstraction: the whole numerical core is generic over `Real`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive};
use rand::distributions::uniform::SampleUniform;

/// Floating-point scalar usable throughout the crate: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + SampleUniform
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless shorthand for embedding small literals.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in Real")
    }

    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable in Real")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        assert_eq!(f64::of(1.5), 1.5);
        assert_eq!(f32::of(0.25), 0.25f32);
        assert_eq!(f64::of_usize(7), 7.0);
    }
}
