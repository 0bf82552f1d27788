//! Scalar abstractions shared by the numeric and exact layers.
//!
//! Kinematics and the uncertainty formulas only need field operations, so they
//! are written against [`Scalar`] and run unchanged on `f32`, `f64` and exact
//! rationals. Anything that takes square roots, logarithms or trigonometric
//! functions is written against [`Real`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed};

/// Ordered field element: `f32`, `f64` or an exact rational.
pub trait Scalar:
    Clone + Num + Signed + PartialOrd + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Clone + Num + Signed + PartialOrd + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Floating-point scalar used by the numerical modules.
pub trait Real: Scalar + Float + FloatConst + Copy {
    /// Converts an `f64` literal; every `Real` can represent it approximately.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    /// Converts a count or index.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `(x)²` without moving `x`.
#[inline]
pub(crate) fn sq<T: Scalar>(x: &T) -> T {
    x.clone() * x.clone()
}
