//! Scalar abstraction shared by the numeric parts of the crate.
//!
//! Cyclissity and polyline simplification are written once against these
//! traits and instantiated for `f32`, `f64` and exact rationals.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Anything usable as a cyclissity value: floats or exact rationals.
pub trait Scalar: Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive {
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count not representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive {}

/// Floating point scalar for geometry (f32 or f64).
pub trait Real: Float + FromPrimitive + Debug {}

impl Real for f32 {}
impl Real for f64 {}
