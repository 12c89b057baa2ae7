use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Scalar;

/// Number of fractional decimal digits a [`Price`] stores exactly.
pub const PRICE_DECIMALS: u32 = 6;
pub const MICROS_PER_UNIT: i64 = 1_000_000;

/// Fixed-point amount in yen-per-dollar with six fractional digits.
///
/// Used both for quoted rates and for signed differences of rates (profits,
/// offsets). Addition and subtraction are exact.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Price(i64);

impl Price {
    pub const ZERO: Price = Price(0);

    pub const fn from_micros(micros: i64) -> Self {
        Price(micros)
    }

    pub const fn micros(self) -> i64 {
        self.0
    }

    /// Rounds a floating point amount to the nearest micro-yen.
    pub fn from_f64_rounded(v: f64) -> Option<Self> {
        let scaled = (v * MICROS_PER_UNIT as f64).round();
        if scaled.is_finite() && scaled.abs() < i64::MAX as f64 {
            Some(Price(scaled as i64))
        } else {
            None
        }
    }

    pub fn to_scalar<T: Scalar>(self) -> T {
        T::ratio(self.0 as i128, MICROS_PER_UNIT as i128)
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn abs(self) -> Self {
        Price(self.0.abs())
    }
}

impl Add for Price {
    type Output = Price;
    fn add(self, rhs: Price) -> Price {
        Price(self.0 + rhs.0)
    }
}

impl AddAssign for Price {
    fn add_assign(&mut self, rhs: Price) {
        self.0 += rhs.0;
    }
}

impl Sub for Price {
    type Output = Price;
    fn sub(self, rhs: Price) -> Price {
        Price(self.0 - rhs.0)
    }
}

impl Neg for Price {
    type Output = Price;
    fn neg(self) -> Price {
        Price(-self.0)
    }
}

impl Sum for Price {
    fn sum<I: Iterator<Item = Price>>(iter: I) -> Price {
        iter.fold(Price::ZERO, Add::add)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePriceError(String);

impl fmt::Display for ParsePriceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParsePriceError {}

impl FromStr for Price {
    type Err = ParsePriceError;

    /// Accepts plain decimal literals (`108`, `108.5`, `-0.004`) with at most
    /// six fractional digits. No exponents, no thousands separators.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePriceError(format!("invalid decimal {s:?}"));
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        if frac_part.len() > PRICE_DECIMALS as usize {
            return Err(ParsePriceError(format!(
                "{s:?} has more than {PRICE_DECIMALS} fractional digits"
            )));
        }
        let int_value: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| err())?
        };
        let mut frac_value: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| err())?
        };
        for _ in frac_part.len()..PRICE_DECIMALS as usize {
            frac_value *= 10;
        }
        let micros = int_value
            .checked_mul(MICROS_PER_UNIT)
            .and_then(|v| v.checked_add(frac_value))
            .ok_or_else(err)?;
        Ok(Price(if negative { -micros } else { micros }))
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let unit = MICROS_PER_UNIT as u64;
        write!(f, "{sign}{}.{:06}", abs / unit, abs % unit)
    }
}

/// Serialized as a JSON number; six decimals survive the `f64` round trip.
impl Serialize for Price {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.to_scalar())
    }
}

impl<'de> Deserialize<'de> for Price {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(deserializer)?;
        Price::from_f64_rounded(v).ok_or_else(|| serde::de::Error::custom(format!("price {v} out of range")))
    }
}
