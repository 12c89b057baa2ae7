//! Minute-resolution bid/ask quotes grouped into per-day series.
//!
//! All timestamps are JST wall-clock times; nothing here converts time zones.
//! Prices are held as exact fixed-point values and only become floating point
//! when a statistic is reported.

mod io;
mod minute;
mod price;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::Scalar;

pub use io::{load_quotes, write_quotes, CsvSpec};
pub use minute::{Minute, ParseMinuteError, MINUTES_PER_DAY};
pub use price::{ParsePriceError, Price, MICROS_PER_UNIT, PRICE_DECIMALS};

/// One bid/ask pair at a minute of the day.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinuteQuote {
    pub minute: Minute,
    pub bid: Price,
    pub ask: Price,
}

impl MinuteQuote {
    /// Validates `ask >= bid > 0`.
    pub fn new(minute: Minute, bid: Price, ask: Price) -> Result<Self> {
        if !bid.is_positive() {
            return Err(Error::argument(format!("bid {bid} at {minute} is not positive")));
        }
        if ask < bid {
            return Err(Error::argument(format!("bid {bid} exceeds ask {ask} at {minute}")));
        }
        Ok(MinuteQuote { minute, bid, ask })
    }

    /// Mid rate `(bid + ask) / 2`.
    pub fn mid<T: Scalar>(&self) -> T {
        T::ratio(self.mid2_micros() as i128, 2 * MICROS_PER_UNIT as i128)
    }

    /// Twice the mid rate in micro-yen. Exact, which lets comparisons and sums
    /// of mids stay in integer arithmetic.
    pub fn mid2_micros(&self) -> i64 {
        self.bid.micros() + self.ask.micros()
    }

    pub fn spread(&self) -> Price {
        self.ask - self.bid
    }
}

/// Free-function form of [`MinuteQuote::mid`].
pub fn mid<T: Scalar>(q: &MinuteQuote) -> T {
    q.mid()
}

/// All quotes of one trading date, strictly increasing by minute. Minutes may
/// be missing; nothing is forward-filled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaySeries {
    date: NaiveDate,
    quotes: Vec<MinuteQuote>,
}

impl DaySeries {
    pub fn new(date: NaiveDate, quotes: Vec<MinuteQuote>) -> Result<Self> {
        if let Some(w) = quotes.windows(2).find(|w| w[0].minute >= w[1].minute) {
            return Err(Error::argument(format!(
                "{date}: quote minutes not strictly increasing at {}",
                w[1].minute
            )));
        }
        Ok(DaySeries { date, quotes })
    }

    pub fn date(&self) -> NaiveDate {
        self.date
    }

    pub fn quotes(&self) -> &[MinuteQuote] {
        &self.quotes
    }

    pub fn len(&self) -> usize {
        self.quotes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotes.is_empty()
    }

    /// Quote at exactly `minute`, by binary search.
    pub fn rate_at(&self, minute: Minute) -> Option<&MinuteQuote> {
        self.quotes
            .binary_search_by_key(&minute, |q| q.minute)
            .ok()
            .map(|i| &self.quotes[i])
    }

    pub fn mid_at<T: Scalar>(&self, minute: Minute) -> Option<T> {
        self.rate_at(minute).map(MinuteQuote::mid)
    }

    pub(crate) fn mid2_at(&self, minute: Minute) -> Option<i64> {
        self.rate_at(minute).map(MinuteQuote::mid2_micros)
    }
}

/// Free-function form of [`DaySeries::rate_at`].
pub fn rate_at(day: &DaySeries, minute: Minute) -> Option<&MinuteQuote> {
    day.rate_at(minute)
}
