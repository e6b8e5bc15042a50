//! Floating-point abstraction the bandit math is written against.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar type used for means, divergences, indices and regret.
///
/// Implemented for `f32` and `f64`. Counts (pulls, time steps) stay integral
/// and are converted through [`Scalar::from_count`].
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Absolute tolerance on `u` when bisecting for a KL upper confidence bound.
    ///
    /// `1e-9`, floored at a few ulps of 1 for narrow types.
    fn bisection_tolerance() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(8.0))
    }

    /// Tolerance for row sums of a stochastic matrix of dimension `n`.
    fn row_sum_tolerance(n: usize) -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(4.0 * n.max(1) as f64))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
