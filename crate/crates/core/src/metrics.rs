//! Trade statistics: count, profit factor, payoff ratio, win rate, and the
//! cumulative earnings curve.
//!
//! A trade wins when its profit is strictly positive. Everything else,
//! including break-even trades, counts as a loss: a zero profit adds nothing
//! to the loss total but does count toward the average loss.

use chrono::NaiveDate;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::marketdata::{Minute, Price, MICROS_PER_UNIT};
use crate::strategy::{SkippedDay, StrategyRun, Trade};
use crate::Scalar;

/// A ratio whose denominator may vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio<T> {
    Finite(T),
    /// Positive numerator over a zero denominator.
    Infinite,
    /// Zero over zero.
    Undefined,
}

impl<T: Scalar> Ratio<T> {
    fn of(num: i128, den: i128) -> Self {
        match (num, den) {
            (0, 0) => Ratio::Undefined,
            (_, 0) => Ratio::Infinite,
            (n, d) => Ratio::Finite(T::ratio(n, d)),
        }
    }

    pub fn value(self) -> Option<T> {
        match self {
            Ratio::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Ratio::Infinite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulativePoint<T> {
    pub date: NaiveDate,
    pub entry_minute: Minute,
    pub total: T,
}

impl<T: Serialize> Serialize for CumulativePoint<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CumulativePoint", 3)?;
        s.serialize_field("date", &self.date)?;
        s.serialize_field("entry_minute", &self.entry_minute)?;
        s.serialize_field("total", &self.total)?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceReport<T> {
    pub n_trades: usize,
    pub n_wins: usize,
    pub n_losses: usize,
    pub profit_factor: Ratio<T>,
    pub payoff_ratio: Ratio<T>,
    pub win_rate: T,
    /// Exact sum of profits.
    pub total: Price,
    /// Trades in `(date, entry_minute)` order.
    pub trades: Vec<Trade>,
    pub cumulative: Vec<CumulativePoint<T>>,
    pub skipped_days: Vec<SkippedDay>,
}

impl<T: Scalar> PerformanceReport<T> {
    pub fn total_profit(&self) -> T {
        self.total.to_scalar()
    }

    pub fn mean_profit(&self) -> Option<T> {
        (self.n_trades > 0).then(|| {
            T::ratio(
                self.total.micros() as i128,
                self.n_trades as i128 * MICROS_PER_UNIT as i128,
            )
        })
    }

    pub fn with_skipped(mut self, skipped: Vec<SkippedDay>) -> Self {
        self.skipped_days = skipped;
        self
    }
}

fn sorted(trades: &[Trade]) -> Vec<Trade> {
    let mut v = trades.to_vec();
    v.sort_by_key(|t| (t.date, t.entry_minute));
    v
}

/// Running total of profits in `(date, entry_minute)` order, one point per trade.
pub fn cumulative_curve<T: Scalar>(trades: &[Trade]) -> Vec<CumulativePoint<T>> {
    let mut running: i128 = 0;
    sorted(trades)
        .into_iter()
        .map(|t| {
            running += t.profit.micros() as i128;
            CumulativePoint {
                date: t.date,
                entry_minute: t.entry_minute,
                total: T::ratio(running, MICROS_PER_UNIT as i128),
            }
        })
        .collect()
}

pub fn evaluate<T: Scalar>(trades: &[Trade]) -> PerformanceReport<T> {
    let n = trades.len();
    let (mut win_sum, mut loss_sum) = (0i128, 0i128);
    let mut n_wins = 0usize;
    for t in trades {
        let p = t.profit.micros() as i128;
        if p > 0 {
            win_sum += p;
            n_wins += 1;
        } else {
            loss_sum += -p;
        }
    }
    let n_losses = n - n_wins;

    let profit_factor = Ratio::of(win_sum, loss_sum);
    // mean(wins) / |mean(losses)| = (win_sum * n_losses) / (loss_sum * n_wins)
    let payoff_ratio = match (n_wins, n_losses) {
        (0, 0) => Ratio::Undefined,
        (0, _) if loss_sum > 0 => Ratio::Finite(T::zero()),
        (0, _) => Ratio::Undefined,
        (_, 0) => Ratio::Infinite,
        (w, l) => Ratio::of(win_sum * l as i128, loss_sum * w as i128),
    };
    let win_rate = if n == 0 {
        T::zero()
    } else {
        T::ratio(n_wins as i128, n as i128)
    };

    PerformanceReport {
        n_trades: n,
        n_wins,
        n_losses,
        profit_factor,
        payoff_ratio,
        win_rate,
        total: trades.iter().map(|t| t.profit).sum(),
        trades: sorted(trades),
        cumulative: cumulative_curve(trades),
        skipped_days: Vec::new(),
    }
}

/// Report for a strategy run, carrying over its skipped days.
pub fn evaluate_run<T: Scalar>(run: &StrategyRun) -> PerformanceReport<T> {
    evaluate(&run.trades).with_skipped(run.skipped.clone())
}

impl<T: Scalar + Serialize> Serialize for PerformanceReport<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PerformanceReport", 12)?;
        s.serialize_field("n_trades", &self.n_trades)?;
        s.serialize_field("n_wins", &self.n_wins)?;
        s.serialize_field("n_losses", &self.n_losses)?;
        s.serialize_field("profit_factor", &self.profit_factor.value())?;
        s.serialize_field("profit_factor_infinite", &self.profit_factor.is_infinite())?;
        s.serialize_field("payoff_ratio", &self.payoff_ratio.value())?;
        s.serialize_field("payoff_ratio_infinite", &self.payoff_ratio.is_infinite())?;
        s.serialize_field("win_rate", &self.win_rate)?;
        s.serialize_field("total_profit", &self.total)?;
        s.serialize_field("skipped_days", &self.skipped_days)?;
        s.serialize_field("trades", &self.trades)?;
        s.serialize_field("cumulative", &self.cumulative)?;
        s.end()
    }
}
