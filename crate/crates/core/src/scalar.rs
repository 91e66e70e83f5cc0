//! Numeric abstraction shared by the solver, geometry and method code.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar the crate computes in: `f32` or `f64`.
///
/// Tolerances are per-type so that `f32` instances do not chase `f64`
/// precision they cannot represent.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Absolute per-row feasibility tolerance.
    const FEAS_TOL: Self;
    /// Reduced-cost optimality tolerance.
    const OPT_TOL: Self;
    /// Smallest pivot magnitude accepted by the ratio test.
    const PIVOT_TOL: Self;
    /// Relative tolerance used by the hull kernels for orientation tests.
    const GEOM_EPS: Self;

    fn lit(v: f64) -> Self;

    fn as_f64(self) -> f64;
}

impl Scalar for f64 {
    const FEAS_TOL: Self = 1e-6;
    const OPT_TOL: Self = 1e-9;
    const PIVOT_TOL: Self = 1e-9;
    const GEOM_EPS: Self = 1e-12;

    #[inline]
    fn lit(v: f64) -> Self {
        v
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    const FEAS_TOL: Self = 1e-4;
    const OPT_TOL: Self = 1e-5;
    const PIVOT_TOL: Self = 1e-6;
    const GEOM_EPS: Self = 1e-5;

    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// L-infinity distance.
pub fn linf<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
}
