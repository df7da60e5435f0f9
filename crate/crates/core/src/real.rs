//! Scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar accepted by the library (implemented for `f32` and `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal fits every Real")
    }

    /// Converts a count or index.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits every Real")
    }

    /// Lossless widening to `f64`, used for error payloads and reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `exp(-x*x)` with the rounding error of `x*x` folded back in.
    ///
    /// Plain `(-x*x).exp()` has a relative error of about `x*x*eps`, which is
    /// visible in the tails of the error function family.
    #[inline]
    fn exp_neg_sq(self) -> Self {
        let hi = self * self;
        let lo = self.mul_add(self, -hi);
        (-hi).exp() * (-lo).exp()
    }

    /// `exp(x*x)` with the same compensation as [`Real::exp_neg_sq`].
    #[inline]
    fn exp_sq(self) -> Self {
        let hi = self * self;
        let lo = self.mul_add(self, -hi);
        hi.exp() * lo.exp()
    }
}

impl Real for f32 {}
impl Real for f64 {}
