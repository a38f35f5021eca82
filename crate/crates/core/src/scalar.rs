//! Floating-point abstraction shared by the numerical modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the information-theoretic and solver code is generic over.
///
/// Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts a count into this scalar type.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Tolerance used when validating that `n` probabilities sum to one.
    ///
    /// `1e-9` for `f64`; widened for narrower types where accumulated rounding
    /// over `n` terms exceeds that.
    fn mass_tolerance(n: usize) -> Self {
        let floor = Self::lit(1e-9);
        let rounding = Self::epsilon() * Self::count(8 * n.max(1));
        floor.max(rounding)
    }

    /// `log2(x)` with `log2(0) = -inf`.
    fn log2_safe(self) -> Self {
        if self <= Self::zero() {
            Self::neg_infinity()
        } else {
            self.log2()
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `-p log2 p` with the `0 log 0 = 0` convention.
pub(crate) fn plogp_neg<T: Scalar>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        -p * p.log2()
    }
}
