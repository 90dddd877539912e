//! Scalar abstraction for matrix entries.
//!
//! Everything in the crate is generic over [`Scalar`], so the same code runs
//! on `f64`, `f32` and exact rationals (`Ratio<i64>`). Rationals are handy for
//! checking algebraic laws with zero tolerance.

use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Num
    + Signed
    + Copy
    + PartialOrd
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Default tolerance for column-stochasticity checks.
    fn stoch_tol() -> Self;

    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("cardinality representable in scalar type")
    }

    /// Lossy conversion used for diagnostics and reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn stoch_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn stoch_tol() -> Self {
        1e-5
    }
}

impl Scalar for Ratio<i64> {
    fn stoch_tol() -> Self {
        Ratio::from_integer(0)
    }
}
