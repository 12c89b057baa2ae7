//! Anchored intraday statistics over a set of days.
//!
//! Every statistic is measured relative to the mid at an anchor minute (the
//! 09:55 fixing by default). Days without an anchor quote are skipped and
//! listed in the result. Offsets are accumulated as exact integers, so the
//! results do not depend on the order days are supplied in.

use chrono::NaiveDate;
use log::warn;

use crate::error::{Error, Result};
use crate::marketdata::{DaySeries, Minute, MICROS_PER_UNIT, MINUTES_PER_DAY};
use crate::Scalar;

const MID2_SCALE: i128 = 2 * MICROS_PER_UNIT as i128;

/// Mean offset from the anchor mid, per minute.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve<T> {
    pub anchor: Minute,
    pub minutes: Vec<Minute>,
    pub mean_offset: Vec<T>,
    pub n_days: Vec<usize>,
    /// Days dropped for lacking an anchor quote.
    pub skipped: Vec<NaiveDate>,
}

/// Share of days whose mid is strictly above the anchor mid, per minute.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityCurve<T> {
    pub anchor: Minute,
    pub minutes: Vec<Minute>,
    pub prob: Vec<T>,
    pub n_days: Vec<usize>,
    pub skipped: Vec<NaiveDate>,
}

/// Per-day move over `[anchor, anchor + horizon]` and its running total.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSeries<T> {
    pub anchor: Minute,
    pub horizon: u16,
    pub dates: Vec<NaiveDate>,
    pub per_day: Vec<T>,
    pub cumulative: Vec<T>,
    pub skipped: Vec<NaiveDate>,
}

impl<T: Scalar> ProfileCurve<T> {
    pub fn offset_at(&self, minute: Minute) -> Option<T> {
        let i = self.minutes.binary_search(&minute).ok()?;
        Some(self.mean_offset[i])
    }
}

impl<T: Scalar> ProbabilityCurve<T> {
    pub fn prob_at(&self, minute: Minute) -> Option<T> {
        let i = self.minutes.binary_search(&minute).ok()?;
        Some(self.prob[i])
    }
}

impl<T: Scalar> DriftSeries<T> {
    pub fn total(&self) -> T {
        self.cumulative.last().copied().unwrap_or_else(T::zero)
    }
}

/// Days paired with their doubled anchor mid, and the dates lacking one.
type Anchored<'a> = (Vec<(&'a DaySeries, i64)>, Vec<NaiveDate>);

/// Splits `days` into those with an anchor quote (paired with its doubled
/// mid) and the dates of those without.
fn anchored(days: &[DaySeries], anchor: Minute) -> Result<Anchored<'_>> {
    let mut used = Vec::with_capacity(days.len());
    let mut skipped = Vec::new();
    for day in days {
        match day.mid2_at(anchor) {
            Some(a) => used.push((day, a)),
            None => {
                warn!("{}: no quote at anchor {anchor}, day skipped", day.date());
                skipped.push(day.date());
            }
        }
    }
    skipped.sort_unstable();
    if used.is_empty() {
        return Err(Error::EmptyInput(format!(
            "none of {} days has a quote at {anchor}",
            days.len()
        )));
    }
    Ok((used, skipped))
}

/// Per-minute accumulation over anchored days.
fn accumulate<F>(days: &[DaySeries], anchor: Minute, mut f: F) -> Result<(Vec<usize>, Vec<NaiveDate>)>
where
    F: FnMut(usize, i64),
{
    let (used, skipped) = anchored(days, anchor)?;
    let mut counts = vec![0usize; MINUTES_PER_DAY as usize];
    for (day, a) in used {
        for q in day.quotes() {
            let i = q.minute.index() as usize;
            counts[i] += 1;
            f(i, q.mid2_micros() - a);
        }
    }
    Ok((counts, skipped))
}

/// Mean of `mid(m) - mid(anchor)` across days, for every minute any
/// anchored day has a quote at.
pub fn intraday_profile<T: Scalar>(days: &[DaySeries], anchor: Minute) -> Result<ProfileCurve<T>> {
    let mut sums = vec![0i128; MINUTES_PER_DAY as usize];
    let (counts, skipped) = accumulate(days, anchor, |i, d| sums[i] += d as i128)?;
    let mut curve = ProfileCurve {
        anchor,
        minutes: Vec::new(),
        mean_offset: Vec::new(),
        n_days: Vec::new(),
        skipped,
    };
    for (i, (&n, &s)) in counts.iter().zip(&sums).enumerate() {
        if n > 0 {
            curve.minutes.push(Minute::new(i as u16).expect("index within day"));
            curve.mean_offset.push(T::ratio(s, n as i128 * MID2_SCALE));
            curve.n_days.push(n);
        }
    }
    Ok(curve)
}

/// Fraction of days with `mid(m) > mid(anchor)`, strictly.
pub fn prob_above_anchor<T: Scalar>(days: &[DaySeries], anchor: Minute) -> Result<ProbabilityCurve<T>> {
    let mut above = vec![0usize; MINUTES_PER_DAY as usize];
    let (counts, skipped) = accumulate(days, anchor, |i, d| {
        if d > 0 {
            above[i] += 1;
        }
    })?;
    let mut curve = ProbabilityCurve {
        anchor,
        minutes: Vec::new(),
        prob: Vec::new(),
        n_days: Vec::new(),
        skipped,
    };
    for (i, (&n, &k)) in counts.iter().zip(&above).enumerate() {
        if n > 0 {
            curve.minutes.push(Minute::new(i as u16).expect("index within day"));
            curve.prob.push(T::ratio(k as i128, n as i128));
            curve.n_days.push(n);
        }
    }
    Ok(curve)
}

/// `mid(anchor + horizon) - mid(anchor)` per day, dates ascending, with a
/// running sum.
pub fn post_announcement_drift<T: Scalar>(days: &[DaySeries], anchor: Minute, horizon: u16) -> Result<DriftSeries<T>> {
    if horizon == 0 {
        return Err(Error::argument("drift horizon must be at least 1 minute"));
    }
    let end = anchor
        .checked_add(horizon)
        .ok_or_else(|| Error::argument(format!("{anchor} + {horizon} minutes runs past midnight")))?;
    let mut moves: Vec<(NaiveDate, i64)> = Vec::new();
    let mut skipped = Vec::new();
    for day in days {
        match (day.mid2_at(anchor), day.mid2_at(end)) {
            (Some(a), Some(b)) => moves.push((day.date(), b - a)),
            _ => {
                warn!("{}: missing quote at {anchor} or {end}, day skipped", day.date());
                skipped.push(day.date());
            }
        }
    }
    if moves.is_empty() {
        return Err(Error::EmptyInput(format!(
            "none of {} days has quotes at both {anchor} and {end}",
            days.len()
        )));
    }
    moves.sort_by_key(|(d, _)| *d);
    skipped.sort_unstable();
    let mut running: i128 = 0;
    let mut series = DriftSeries {
        anchor,
        horizon,
        dates: Vec::with_capacity(moves.len()),
        per_day: Vec::with_capacity(moves.len()),
        cumulative: Vec::with_capacity(moves.len()),
        skipped,
    };
    for (date, mv) in moves {
        running += mv as i128;
        series.dates.push(date);
        series.per_day.push(T::ratio(mv as i128, MID2_SCALE));
        series.cumulative.push(T::ratio(running, MID2_SCALE));
    }
    Ok(series)
}
