use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating point type the statistics are reported in: `f32` or `f64`.
///
/// Prices themselves are fixed-point (see [`crate::Price`]); a `Scalar` only
/// appears once an exact integer quantity is turned into a mean or a ratio.
pub trait Scalar: Float + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an exact integer quantity. Saturates rather than failing for
    /// magnitudes beyond the type's range.
    fn from_int(v: i128) -> Self {
        <Self as NumCast>::from(v).unwrap_or_else(|| if v < 0 { Self::neg_infinity() } else { Self::infinity() })
    }

    fn from_usize_lossy(v: usize) -> Self {
        <Self as NumCast>::from(v).unwrap_or_else(Self::infinity)
    }

    /// Ratio of two integer quantities. Both operands are exact in `f64` for
    /// magnitudes below 2^53.
    fn ratio(num: i128, den: i128) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
