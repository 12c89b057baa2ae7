//! Gotobi-day classification over a holiday-aware trading calendar.
//!
//! A nominal Gotobi date is any 5th, 10th, 15th, 20th, 25th or 30th. When it
//! is not a business day it is replaced by the closest earlier business day.
//! Only Tuesday through Friday is ever used for sampling, so substitutes that
//! land on a Monday are labelled [`DayKind::Excluded`] instead of being moved
//! again.

use std::collections::BTreeSet;
use std::io::Read;

use chrono::{Datelike, Days, Months, NaiveDate, Weekday};
use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub const GOTOBI_DAYS_OF_MONTH: [u32; 6] = [5, 10, 15, 20, 25, 30];

const BUNDLED_HOLIDAYS: &str = include_str!("../data/jp_holidays_2018_2020.csv");

/// How far back a non-business Gotobi date may be moved before giving up.
const MAX_SHIFT_DAYS: u64 = 31;

/// Inclusive range of calendar dates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DateRange {
    start: NaiveDate,
    end: NaiveDate,
}

impl DateRange {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if end < start {
            return Err(Error::argument(format!(
                "date range ends ({end}) before it starts ({start})"
            )));
        }
        Ok(DateRange { start, end })
    }

    pub fn start(&self) -> NaiveDate {
        self.start
    }

    pub fn end(&self) -> NaiveDate {
        self.end
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }

    pub fn days(&self) -> impl Iterator<Item = NaiveDate> {
        let end = self.end;
        self.start.iter_days().take_while(move |d| *d <= end)
    }
}

/// Holidays plus weekend rule. Holidays never contain weekend dates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradingCalendar {
    holidays: BTreeSet<NaiveDate>,
    weekend_days: Vec<Weekday>,
}

impl Default for TradingCalendar {
    fn default() -> Self {
        Self::weekends_only()
    }
}

impl TradingCalendar {
    /// Builds a calendar, dropping any holiday that already falls on a weekend.
    pub fn new(holidays: impl IntoIterator<Item = NaiveDate>, weekend_days: Vec<Weekday>) -> Self {
        let holidays = holidays
            .into_iter()
            .filter(|d| {
                let weekend = weekend_days.contains(&d.weekday());
                if weekend {
                    warn!("holiday {d} falls on a weekend and is ignored");
                }
                !weekend
            })
            .collect();
        TradingCalendar { holidays, weekend_days }
    }

    /// Saturday/Sunday weekends and no holidays.
    pub fn weekends_only() -> Self {
        Self::new([], vec![Weekday::Sat, Weekday::Sun])
    }

    /// Japanese national holidays and the Dec 31 to Jan 3 bank closure, 2018 to 2020.
    pub fn bundled() -> Self {
        Self::from_holiday_csv(BUNDLED_HOLIDAYS.as_bytes()).expect("bundled holiday file is well formed")
    }

    /// Reads a `date,name` holiday file; weekends default to Saturday and Sunday.
    pub fn from_holiday_csv<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(source);
        let header = reader
            .headers()
            .map_err(|e| Error::Parse {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        let first = header.get(0).map(|c| c.trim().to_ascii_lowercase());
        if first.as_deref() != Some("date") {
            return Err(Error::Parse {
                line: 1,
                message: "holiday file must start with a `date,name` header".into(),
            });
        }
        let mut dates = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line());
            let field = record.get(0).unwrap_or("").trim();
            if field.is_empty() {
                continue;
            }
            let date = NaiveDate::parse_from_str(field, "%Y-%m-%d").map_err(|_| Error::Parse {
                line,
                message: format!("invalid date {field:?}, expected YYYY-MM-DD"),
            })?;
            dates.push(date);
        }
        Ok(Self::new(dates, vec![Weekday::Sat, Weekday::Sun]))
    }

    pub fn holidays(&self) -> &BTreeSet<NaiveDate> {
        &self.holidays
    }

    pub fn weekend_days(&self) -> &[Weekday] {
        &self.weekend_days
    }

    pub fn is_weekend(&self, date: NaiveDate) -> bool {
        self.weekend_days.contains(&date.weekday())
    }

    pub fn is_holiday(&self, date: NaiveDate) -> bool {
        self.holidays.contains(&date)
    }

    pub fn is_business_day(&self, date: NaiveDate) -> bool {
        !self.is_weekend(date) && !self.is_holiday(date)
    }

    /// `date` itself if it is a business day, else the nearest earlier one.
    pub fn business_day_on_or_before(&self, date: NaiveDate) -> Option<NaiveDate> {
        let mut d = date;
        for _ in 0..=MAX_SHIFT_DAYS {
            if self.is_business_day(d) {
                return Some(d);
            }
            d = d.pred_opt()?;
        }
        None
    }

    /// Business day that is also Tuesday through Friday.
    pub fn is_sampling_day(&self, date: NaiveDate) -> bool {
        is_tue_to_fri(date.weekday()) && self.is_business_day(date)
    }
}

pub fn is_tue_to_fri(w: Weekday) -> bool {
    matches!(w, Weekday::Tue | Weekday::Wed | Weekday::Thu | Weekday::Fri)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DayKind {
    GotobiEffective,
    NonGotobi,
    Excluded,
}

impl DayKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DayKind::GotobiEffective => "gotobi",
            DayKind::NonGotobi => "non_gotobi",
            DayKind::Excluded => "excluded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DayLabel {
    pub date: NaiveDate,
    pub kind: DayKind,
    /// Nominal Gotobi date this day stands in for (itself when not shifted).
    pub source_gotobi: Option<NaiveDate>,
}

/// Day-of-month is 5, 10, 15, 20, 25 or 30.
pub fn is_gotobi_date(date: NaiveDate) -> bool {
    GOTOBI_DAYS_OF_MONTH.contains(&date.day())
}

/// Nominal Gotobi dates inside `range`, ascending.
pub fn nominal_gotobi_dates(range: DateRange) -> Vec<NaiveDate> {
    let mut out = Vec::new();
    let mut month = range.start().with_day(1).expect("day 1 exists");
    while month <= range.end() {
        for dom in GOTOBI_DAYS_OF_MONTH {
            if let Some(d) = month.with_day(dom) {
                if range.contains(d) {
                    out.push(d);
                }
            }
        }
        month = match month.checked_add_months(Months::new(1)) {
            Some(m) => m,
            None => break,
        };
    }
    out
}

/// Effective Gotobi days for every nominal Gotobi date in `range`.
///
/// Labels are ascending and unique by date. When two nominal dates collapse
/// onto the same business day the earlier nominal date is kept as the source.
/// A substitute may precede `range.start()`.
pub fn effective_gotobi_days(range: DateRange, cal: &TradingCalendar) -> Result<Vec<DayLabel>> {
    let mut labels: Vec<DayLabel> = Vec::new();
    for nominal in nominal_gotobi_dates(range) {
        let effective = cal.business_day_on_or_before(nominal).ok_or_else(|| {
            Error::argument(format!(
                "no business day within {MAX_SHIFT_DAYS} days before Gotobi date {nominal}"
            ))
        })?;
        let kind = if is_tue_to_fri(effective.weekday()) {
            DayKind::GotobiEffective
        } else {
            DayKind::Excluded
        };
        labels.push(DayLabel {
            date: effective,
            kind,
            source_gotobi: Some(nominal),
        });
    }
    // stable: equal dates keep nominal order, so dedup keeps the earliest source
    labels.sort_by_key(|l| l.date);
    labels.dedup_by_key(|l| l.date);
    Ok(labels)
}

/// Effective Gotobi days lying inside `range`.
///
/// Substitutes for nominal dates up to a month past the range end are
/// included, so whether a date counts does not depend on where the range
/// happens to stop.
pub fn effective_gotobi_dates_within(range: DateRange, cal: &TradingCalendar) -> Result<BTreeSet<NaiveDate>> {
    let lookahead = range
        .end()
        .checked_add_days(Days::new(MAX_SHIFT_DAYS))
        .unwrap_or(range.end());
    Ok(effective_gotobi_days(DateRange::new(range.start(), lookahead)?, cal)?
        .into_iter()
        .filter(|l| l.kind == DayKind::GotobiEffective && range.contains(l.date))
        .map(|l| l.date)
        .collect())
}

/// Tuesday-to-Friday business days in `range` that are neither nominal
/// Gotobi dates nor substitutes for one.
pub fn eligible_non_gotobi(range: DateRange, cal: &TradingCalendar) -> Result<Vec<NaiveDate>> {
    let substitutes = effective_gotobi_dates_within(range, cal)?;
    Ok(range
        .days()
        .filter(|d| cal.is_sampling_day(*d) && !is_gotobi_date(*d) && !substitutes.contains(d))
        .collect())
}

/// Draws `count` distinct dates uniformly from `pool`, returned ascending.
/// The same `(pool, count, seed)` always yields the same dates.
pub fn sample_from_pool(pool: &[NaiveDate], count: usize, seed: u64) -> Result<Vec<NaiveDate>> {
    if count > pool.len() {
        return Err(Error::Capacity {
            pool: pool.len(),
            requested: count,
        });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut picked: Vec<NaiveDate> = rand::seq::index::sample(&mut rng, pool.len(), count)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort_unstable();
    Ok(picked)
}

/// Control days: `count` non-Gotobi sampling days from `range`.
pub fn sample_non_gotobi(range: DateRange, count: usize, cal: &TradingCalendar, seed: u64) -> Result<Vec<NaiveDate>> {
    let pool = eligible_non_gotobi(range, cal)?;
    sample_from_pool(&pool, count, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn range(a: NaiveDate, b: NaiveDate) -> DateRange {
        DateRange::new(a, b).unwrap()
    }

    #[test]
    fn gotobi_dates() {
        assert!(is_gotobi_date(ymd(2018, 5, 10)));
        assert!(!is_gotobi_date(ymd(2020, 2, 29)));
        assert!(!is_gotobi_date(ymd(2019, 12, 31)));
        assert!(is_gotobi_date(ymd(2019, 9, 30)));
    }

    #[test]
    fn sunday_shifts_to_friday() {
        let day = ymd(2020, 4, 5);
        assert_eq!(day.weekday(), Weekday::Sun);
        let labels = effective_gotobi_days(range(day, day), &TradingCalendar::weekends_only()).unwrap();
        assert_eq!(
            labels,
            vec![DayLabel {
                date: ymd(2020, 4, 3),
                kind: DayKind::GotobiEffective,
                source_gotobi: Some(day),
            }]
        );
    }

    #[test]
    fn monday_is_excluded() {
        let day = ymd(2019, 9, 30);
        assert_eq!(day.weekday(), Weekday::Mon);
        let labels = effective_gotobi_days(range(day, day), &TradingCalendar::bundled()).unwrap();
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].kind, DayKind::Excluded);
        assert_eq!(labels[0].date, day);
    }

    #[test]
    fn business_thursday_is_itself() {
        let day = ymd(2018, 5, 10);
        assert_eq!(day.weekday(), Weekday::Thu);
        let labels = effective_gotobi_days(range(day, day), &TradingCalendar::bundled()).unwrap();
        assert_eq!(labels[0].date, day);
        assert_eq!(labels[0].kind, DayKind::GotobiEffective);
    }

    #[test]
    fn holiday_tuesday_lands_on_monday_and_is_excluded() {
        // a Gotobi date on a Tuesday holiday backs onto Monday
        let cal = TradingCalendar::new([ymd(2020, 11, 10)], vec![Weekday::Sat, Weekday::Sun]);
        let labels = effective_gotobi_days(range(ymd(2020, 11, 10), ymd(2020, 11, 10)), &cal).unwrap();
        assert_eq!(labels[0].date, ymd(2020, 11, 9));
        assert_eq!(labels[0].kind, DayKind::Excluded);
    }

    #[test]
    fn collapsed_nominals_keep_earliest_source() {
        // Golden Week 2019: Apr 27 to May 6 closed; Apr 30 and May 5 both move to Apr 26.
        let labels =
            effective_gotobi_days(range(ymd(2019, 4, 26), ymd(2019, 5, 6)), &TradingCalendar::bundled()).unwrap();
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].date, ymd(2019, 4, 26));
        assert_eq!(labels[0].source_gotobi, Some(ymd(2019, 4, 30)));
    }

    #[test]
    fn february_has_no_thirtieth() {
        let labels = effective_gotobi_days(
            range(ymd(2019, 2, 26), ymd(2019, 3, 1)),
            &TradingCalendar::weekends_only(),
        )
        .unwrap();
        assert!(labels.is_empty());
    }

    #[test]
    fn invalid_range() {
        assert!(DateRange::new(ymd(2020, 1, 2), ymd(2020, 1, 1)).unwrap_err().is_usage());
    }

    #[test]
    fn weekend_holidays_are_dropped() {
        let cal = TradingCalendar::new([ymd(2020, 4, 4), ymd(2020, 4, 6)], vec![Weekday::Sat, Weekday::Sun]);
        assert_eq!(cal.holidays().len(), 1);
        assert!(TradingCalendar::bundled()
            .holidays()
            .iter()
            .all(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun)));
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let cal = TradingCalendar::bundled();
        let r = range(ymd(2019, 1, 1), ymd(2019, 12, 31));
        assert!(sample_non_gotobi(r, 0, &cal, 1).unwrap().is_empty());
        let a = sample_non_gotobi(r, 40, &cal, 7).unwrap();
        let b = sample_non_gotobi(r, 40, &cal, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        let pool = eligible_non_gotobi(r, &cal).unwrap();
        match sample_non_gotobi(r, pool.len() + 1, &cal, 7) {
            Err(Error::Capacity { pool: p, .. }) => assert_eq!(p, pool.len()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn one_week_pool_is_returned_whole() {
        // Week of 2020-04-06: Tue 7, Wed 8, Thu 9 eligible; Fri 10 is Gotobi.
        let cal = TradingCalendar::weekends_only();
        let r = range(ymd(2020, 4, 6), ymd(2020, 4, 12));
        let brute: Vec<NaiveDate> = r
            .days()
            .filter(|d| {
                let wd = d.weekday().num_days_from_monday();
                (1..=4).contains(&wd) && ![5, 10, 15, 20, 25, 30].contains(&d.day())
            })
            .collect();
        assert_eq!(brute, vec![ymd(2020, 4, 7), ymd(2020, 4, 8), ymd(2020, 4, 9)]);
        assert_eq!(sample_non_gotobi(r, brute.len(), &cal, 99).unwrap(), brute);
    }

    #[test]
    fn pool_excludes_substitutes_for_next_range() {
        // 2020-04-05 is Sunday; its substitute Friday 04-03 must not be a control day.
        let cal = TradingCalendar::weekends_only();
        let pool = eligible_non_gotobi(range(ymd(2020, 3, 31), ymd(2020, 4, 3)), &cal).unwrap();
        assert_eq!(pool, vec![ymd(2020, 3, 31), ymd(2020, 4, 1), ymd(2020, 4, 2)]);
    }
}
