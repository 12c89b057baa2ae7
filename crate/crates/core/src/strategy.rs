//! Per-day trading rules around the Gotobi fixing.
//!
//! * H1: buy dollars in the early morning (03:00, or on a golden cross inside
//!   a half-hour window) and sell at the 09:55 fixing.
//! * H2: sell dollars at the fixing and buy back at 12:00, gated on whether
//!   the morning rise actually happened.
//! * Combined: both legs on the same day.
//!
//! Orders cross the quoted spread: longs buy at the ask and sell at the bid,
//! shorts sell at the bid and buy back at the ask. Position size is one unit,
//! so profits are in yen per dollar.

use std::fmt;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indicators::{detect_golden_cross, MinuteWindow};
use crate::marketdata::{DaySeries, Minute, Price};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyConfig {
    pub use_gc: bool,
    /// Golden-cross window is `[hour-1:30, hour:00)`; valid hours are 1 to 5.
    pub gc_hour: u8,
    pub entry_minute_h1: Minute,
    pub exit_minute_h1: Minute,
    pub gate_minute: Minute,
    pub h2_entry_minute: Minute,
    pub h2_exit_minute: Minute,
    pub short_window: u16,
    pub long_window: u16,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig {
            use_gc: false,
            gc_hour: 3,
            entry_minute_h1: Minute::at(3, 0),
            exit_minute_h1: Minute::at(9, 55),
            gate_minute: Minute::at(9, 0),
            h2_entry_minute: Minute::at(9, 55),
            h2_exit_minute: Minute::at(12, 0),
            short_window: 25,
            long_window: 100,
        }
    }
}

impl StrategyConfig {
    pub fn validate(&self) -> Result<()> {
        let ordered = self.entry_minute_h1 < self.gate_minute
            && self.gate_minute < self.exit_minute_h1
            && self.exit_minute_h1 <= self.h2_entry_minute
            && self.h2_entry_minute < self.h2_exit_minute;
        if !ordered {
            return Err(Error::argument(format!(
                "clock times must satisfy h1 entry ({}) < gate ({}) < h1 exit ({}) <= h2 entry ({}) < h2 exit ({})",
                self.entry_minute_h1, self.gate_minute, self.exit_minute_h1, self.h2_entry_minute, self.h2_exit_minute
            )));
        }
        if self.short_window == 0 || self.short_window >= self.long_window {
            return Err(Error::argument(format!(
                "need 1 <= short window ({}) < long window ({})",
                self.short_window, self.long_window
            )));
        }
        if !(1..=5).contains(&self.gc_hour) {
            return Err(Error::argument(format!(
                "golden-cross hour must be 1 to 5, got {}",
                self.gc_hour
            )));
        }
        if self.use_gc {
            let w = self.gc_window();
            if w.end.is_some_and(|end| end > self.gate_minute) {
                return Err(Error::argument(format!(
                    "golden-cross window [{}, {}) must close by the gate minute {}",
                    w.start,
                    w.end.expect("checked"),
                    self.gate_minute
                )));
            }
        }
        Ok(())
    }

    /// `[gc_hour-1:30, gc_hour:00)`.
    pub fn gc_window(&self) -> MinuteWindow {
        let hour = u16::from(self.gc_hour);
        MinuteWindow {
            start: Minute::hm(hour.saturating_sub(1), 30).unwrap_or(Minute::MIDNIGHT),
            end: Minute::hm(hour, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Long,
    Short,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Long => "long",
            Side::Short => "short",
        })
    }
}

/// One round trip of one unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Trade {
    pub date: NaiveDate,
    pub side: Side,
    pub entry_minute: Minute,
    pub exit_minute: Minute,
    pub entry_price: Price,
    pub exit_price: Price,
    pub profit: Price,
}

impl Trade {
    pub fn new(
        date: NaiveDate,
        side: Side,
        (entry_minute, entry_price): (Minute, Price),
        (exit_minute, exit_price): (Minute, Price),
    ) -> Self {
        debug_assert!(entry_minute < exit_minute);
        let profit = match side {
            Side::Long => exit_price - entry_price,
            Side::Short => entry_price - exit_price,
        };
        Trade {
            date,
            side,
            entry_minute,
            exit_minute,
            entry_price,
            exit_price,
            profit,
        }
    }
}

/// Which H2 days to trade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnomalyGate {
    OnlyWhenAnomaly,
    OnlyWhenNoAnomaly,
    Always,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Leg {
    H1,
    H2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    NoGoldenCross,
    MissingQuote(Minute),
    /// The gate was evaluated and said no.
    GateRejected,
    /// The gate could not be evaluated for lack of quotes.
    GateUndetermined,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::NoGoldenCross => f.write_str("no golden cross in window"),
            SkipReason::MissingQuote(m) => write!(f, "missing quote at {m}"),
            SkipReason::GateRejected => f.write_str("anomaly gate rejected day"),
            SkipReason::GateUndetermined => f.write_str("anomaly gate undetermined (missing quote)"),
        }
    }
}

impl Serialize for SkipReason {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SkippedDay {
    pub date: NaiveDate,
    pub leg: Leg,
    pub reason: SkipReason,
}

/// Trades of one strategy run plus every day that did not trade and why.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrategyRun {
    pub days_considered: usize,
    pub trades: Vec<Trade>,
    pub skipped: Vec<SkippedDay>,
}

impl StrategyRun {
    fn collect(days: &[DaySeries], per_day: impl Fn(&DaySeries) -> DayOutcome + Sync + Send) -> Self {
        let outcomes: Vec<DayOutcome> = days.par_iter().map(per_day).collect();
        let mut run = StrategyRun {
            days_considered: days.len(),
            ..Default::default()
        };
        for o in outcomes {
            run.trades.extend(o.trades);
            run.skipped.extend(o.skipped);
        }
        run.trades.sort_by_key(|t| (t.date, t.entry_minute));
        run.skipped.sort_by_key(|s| (s.date, s.leg));
        run
    }
}

#[derive(Default)]
struct DayOutcome {
    trades: Vec<Trade>,
    skipped: Vec<SkippedDay>,
}

impl DayOutcome {
    fn push(&mut self, date: NaiveDate, leg: Leg, result: std::result::Result<Trade, SkipReason>) {
        match result {
            Ok(t) => self.trades.push(t),
            Err(reason) => self.skipped.push(SkippedDay { date, leg, reason }),
        }
    }
}

fn long_trade(day: &DaySeries, entry: Minute, exit: Minute) -> std::result::Result<Trade, SkipReason> {
    let e = day.rate_at(entry).ok_or(SkipReason::MissingQuote(entry))?;
    let x = day.rate_at(exit).ok_or(SkipReason::MissingQuote(exit))?;
    Ok(Trade::new(day.date(), Side::Long, (entry, e.ask), (exit, x.bid)))
}

fn short_trade(day: &DaySeries, entry: Minute, exit: Minute) -> std::result::Result<Trade, SkipReason> {
    let e = day.rate_at(entry).ok_or(SkipReason::MissingQuote(entry))?;
    let x = day.rate_at(exit).ok_or(SkipReason::MissingQuote(exit))?;
    Ok(Trade::new(day.date(), Side::Short, (entry, e.bid), (exit, x.ask)))
}

/// Mid moved strictly up from `from` to `to`. `None` when a quote is missing.
fn rose_between(day: &DaySeries, from: Minute, to: Minute) -> Option<bool> {
    Some(day.mid2_at(to)? > day.mid2_at(from)?)
}

fn h1_leg(day: &DaySeries, cfg: &StrategyConfig) -> std::result::Result<Trade, SkipReason> {
    let entry = if cfg.use_gc {
        detect_golden_cross(day, cfg.short_window, cfg.long_window, cfg.gc_window())
            .expect("config validated")
            .ok_or(SkipReason::NoGoldenCross)?
    } else {
        cfg.entry_minute_h1
    };
    long_trade(day, entry, cfg.exit_minute_h1)
}

fn h2_leg(
    day: &DaySeries,
    cfg: &StrategyConfig,
    gate: AnomalyGate,
    anomaly: Option<bool>,
) -> std::result::Result<Trade, SkipReason> {
    let pass = match (gate, anomaly) {
        (AnomalyGate::Always, _) => true,
        (_, None) => return Err(SkipReason::GateUndetermined),
        (AnomalyGate::OnlyWhenAnomaly, Some(a)) => a,
        (AnomalyGate::OnlyWhenNoAnomaly, Some(a)) => !a,
    };
    if !pass {
        return Err(SkipReason::GateRejected);
    }
    short_trade(day, cfg.h2_entry_minute, cfg.h2_exit_minute)
}

/// Mid at the gate minute is strictly above the mid at the H1 entry minute.
/// `None` when either quote is missing.
pub fn anomaly_occurred(day: &DaySeries, cfg: &StrategyConfig) -> Option<bool> {
    rose_between(day, cfg.entry_minute_h1, cfg.gate_minute)
}

/// Morning long, one per day at most.
pub fn run_h1(days: &[DaySeries], cfg: &StrategyConfig) -> Result<StrategyRun> {
    cfg.validate()?;
    Ok(StrategyRun::collect(days, |day| {
        let mut out = DayOutcome::default();
        out.push(day.date(), Leg::H1, h1_leg(day, cfg));
        out
    }))
}

/// Post-fixing short on the days `gate` admits.
pub fn run_h2(days: &[DaySeries], cfg: &StrategyConfig, gate: AnomalyGate) -> Result<StrategyRun> {
    cfg.validate()?;
    Ok(StrategyRun::collect(days, |day| {
        let mut out = DayOutcome::default();
        out.push(day.date(), Leg::H2, h2_leg(day, cfg, gate, anomaly_occurred(day, cfg)));
        out
    }))
}

/// Golden-cross H1 plus anomaly-gated H2 on each day.
///
/// When the H1 leg entered, the gate compares the gate-minute mid with the
/// mid at that actual entry minute; otherwise it falls back to the fixed
/// H1 entry minute.
pub fn run_combined(days: &[DaySeries], cfg: &StrategyConfig) -> Result<StrategyRun> {
    cfg.validate()?;
    if !cfg.use_gc {
        return Err(Error::argument(
            "the combined strategy uses the golden-cross entry; enable it",
        ));
    }
    Ok(StrategyRun::collect(days, |day| {
        let mut out = DayOutcome::default();
        let h1 = h1_leg(day, cfg);
        let anomaly = match &h1 {
            Ok(t) => rose_between(day, t.entry_minute, cfg.gate_minute),
            Err(_) => anomaly_occurred(day, cfg),
        };
        out.push(day.date(), Leg::H1, h1);
        out.push(
            day.date(),
            Leg::H2,
            h2_leg(day, cfg, AnomalyGate::OnlyWhenAnomaly, anomaly),
        );
        out
    }))
}
