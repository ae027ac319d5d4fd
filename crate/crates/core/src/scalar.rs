//! Numeric abstractions shared by the solvers.
//!
//! [`Scalar`] is the floating-point type the LP engine and objective
//! evaluator run on. [`Weight`] is the weaker bound used by graph code,
//! which only needs ordered addition and halving, so exact rationals work
//! there too.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Floating-point scalar with solver tolerances attached.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Smallest magnitude accepted as a pivot element.
    fn pivot_tolerance() -> Self;
    /// Slack allowed when checking primal feasibility.
    fn feasibility_tolerance() -> Self;

    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn pivot_tolerance() -> Self {
        1e-9
    }
    fn feasibility_tolerance() -> Self {
        1e-7
    }
}

impl Scalar for f32 {
    fn pivot_tolerance() -> Self {
        1e-5
    }
    fn feasibility_tolerance() -> Self {
        1e-4
    }
}

/// Edge or distance weight: anything ordered that can be summed and halved.
pub trait Weight: Num + PartialOrd + Copy + Debug + Send + Sync + 'static {
    fn half(self) -> Self {
        self / (Self::one() + Self::one())
    }

    fn to_f64_lossy(self) -> f64;
}

impl Weight for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Weight for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Weight for Ratio<i64> {
    fn to_f64_lossy(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Weight for Ratio<i128> {
    fn to_f64_lossy(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}
