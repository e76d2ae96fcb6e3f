//! Scalar abstractions.
//!
//! Gate algebra only needs field operations, so it runs on exact rationals as
//! well as floats. Everything that touches `exp`, `sqrt` or `ln` requires
//! [`Real`].

use std::fmt::Debug;
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Field element usable in phase-space matrices.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for tolerances and literal constants.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(self) -> bool;
}

impl Scalar for f32 {
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f64 {
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Ratio<i64> {
    fn is_finite_value(self) -> bool {
        true
    }
}

impl Scalar for Ratio<i128> {
    fn is_finite_value(self) -> bool {
        true
    }
}

/// Floating-point scalar: f32 or f64.
pub trait Real: Scalar + Float + Sum {
    fn pi() -> Self {
        Self::lit(std::f64::consts::PI)
    }

    fn two_pi() -> Self {
        Self::lit(2.0 * std::f64::consts::PI)
    }
}

impl Real for f32 {}
impl Real for f64 {}
