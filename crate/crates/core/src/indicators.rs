//! Simple moving averages over intraday mids and golden-cross detection.
//!
//! Averages run over consecutive calendar minutes. A missing minute breaks
//! the window, so no average spans a gap. Window sums are kept in exact
//! integer micro-yen, which makes the cross comparison exact.

use crate::error::{Error, Result};
use crate::marketdata::{DaySeries, Minute, MICROS_PER_UNIT, MINUTES_PER_DAY};
use crate::Scalar;

/// Half-open span of minutes `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinuteWindow {
    pub start: Minute,
    /// Exclusive; `None` means through the end of the day.
    pub end: Option<Minute>,
}

impl MinuteWindow {
    pub fn new(start: Minute, end: Minute) -> Result<Self> {
        if start >= end {
            return Err(Error::argument(format!("empty minute window [{start}, {end})")));
        }
        Ok(MinuteWindow { start, end: Some(end) })
    }

    pub fn contains(&self, m: Minute) -> bool {
        self.start <= m && self.end.is_none_or(|e| m < e)
    }

    fn end_index(&self) -> u16 {
        self.end.map_or(MINUTES_PER_DAY, Minute::index)
    }
}

/// Indicator values aligned with the minutes they were computed at.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries<T> {
    pub minutes: Vec<Minute>,
    pub values: Vec<T>,
}

impl<T: Copy> IndicatorSeries<T> {
    pub fn len(&self) -> usize {
        self.minutes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minutes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Minute, T)> + '_ {
        self.minutes.iter().copied().zip(self.values.iter().copied())
    }

    pub fn value_at(&self, minute: Minute) -> Option<T> {
        self.minutes.binary_search(&minute).ok().map(|i| self.values[i])
    }
}

/// Sums of doubled mids (micro-yen) for every minute `<= upto` that ends a
/// run of `window` consecutive quotes.
fn window_sums(day: &DaySeries, window: u16, upto: Minute) -> Vec<(Minute, i64)> {
    let mut out = Vec::new();
    let quotes = day.quotes();
    let mut run_start = 0usize;
    let mut sum: i64 = 0;
    for (i, q) in quotes.iter().enumerate() {
        if q.minute > upto {
            break;
        }
        if i > 0 && quotes[i - 1].minute.index() + 1 != q.minute.index() {
            run_start = i;
            sum = 0;
        }
        sum += q.mid2_micros();
        let len = i + 1 - run_start;
        if len > window as usize {
            sum -= quotes[i - window as usize].mid2_micros();
        }
        if len >= window as usize {
            out.push((q.minute, sum));
        }
    }
    out
}

/// Simple moving average of mids over `window` consecutive minutes, for
/// minutes up to and including `upto`.
pub fn sma<T: Scalar>(day: &DaySeries, window: u16, upto: Minute) -> Result<IndicatorSeries<T>> {
    if window == 0 {
        return Err(Error::argument("moving-average window must be at least 1 minute"));
    }
    let denom = 2 * window as i128 * MICROS_PER_UNIT as i128;
    let (minutes, values) = window_sums(day, window, upto)
        .into_iter()
        .map(|(m, s)| (m, T::ratio(s as i128, denom)))
        .unzip();
    Ok(IndicatorSeries { minutes, values })
}

/// First minute `m` in `search` where the short average moves from at or
/// below the long average at `m - 1` to strictly above it at `m`.
///
/// Both averages must exist at `m - 1` and `m`; otherwise `m` cannot be a
/// cross. Returns `None` when nothing crosses.
pub fn detect_golden_cross(
    day: &DaySeries,
    short_window: u16,
    long_window: u16,
    search: MinuteWindow,
) -> Result<Option<Minute>> {
    if short_window == 0 {
        return Err(Error::argument("moving-average window must be at least 1 minute"));
    }
    if short_window >= long_window {
        return Err(Error::argument(format!(
            "short window ({short_window}) must be shorter than long window ({long_window})"
        )));
    }
    let end = search.end_index();
    if end == 0 {
        return Ok(None);
    }
    let upto = Minute::new(end - 1).expect("end index within day");

    let mut short = vec![None; MINUTES_PER_DAY as usize];
    for (m, s) in window_sums(day, short_window, upto) {
        short[m.index() as usize] = Some(s as i128);
    }
    let mut long = vec![None; MINUTES_PER_DAY as usize];
    for (m, s) in window_sums(day, long_window, upto) {
        long[m.index() as usize] = Some(s as i128);
    }
    let (sw, lw) = (short_window as i128, long_window as i128);
    // short_sum / sw > long_sum / lw  <=>  short_sum * lw > long_sum * sw
    let above = |i: usize| match (short[i], long[i]) {
        (Some(s), Some(l)) => Some(s * lw > l * sw),
        _ => None,
    };
    let first = search.start.index().max(1);
    for i in first..end {
        let i = i as usize;
        if let (Some(false), Some(true)) = (above(i - 1), above(i)) {
            return Ok(Minute::new(i as u16));
        }
    }
    Ok(None)
}
