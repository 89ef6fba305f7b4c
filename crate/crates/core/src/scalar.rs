//! Numeric scalar abstraction shared by the LP and linear-algebra kernels.

use std::fmt::Debug;

use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Field element usable by the simplex and elimination routines.
///
/// Exact types report a zero tolerance, so every sign test is exact.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Magnitudes at or below this value are treated as zero.
    fn tolerance() -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable in scalar")
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    fn is_strictly_positive(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_strictly_negative(&self) -> bool {
        *self < -Self::tolerance()
    }

    /// The value as an `i64` when it is exactly an integer in range. Only
    /// exact types answer; floats return `None`.
    fn to_i64_exact(&self) -> Option<i64> {
        None
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        BigRational::from_integer(0.into())
    }

    fn to_i64_exact(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

impl Scalar for Rational64 {
    fn tolerance() -> Self {
        Rational64::from_integer(0)
    }

    fn to_i64_exact(&self) -> Option<i64> {
        self.is_integer().then(|| *self.numer())
    }
}
