//! Gotobi-day analysis and backtesting on minute-resolution USD/JPY quotes.
//!
//! Quotes are stored as exact fixed-point prices. Statistics are generic over
//! the reporting float type ([`Scalar`], implemented for `f32` and `f64`);
//! the aliases below fix it to [`Real`] for everyday use.

pub mod analysis;
pub mod calendar;
pub mod error;
pub mod indicators;
pub mod marketdata;
pub mod metrics;
pub mod scalar;
pub mod strategy;
pub mod synthdata;

pub use calendar::{DateRange, DayKind, DayLabel, TradingCalendar};
pub use error::{Error, Result};
pub use marketdata::{CsvSpec, DaySeries, Minute, MinuteQuote, Price};
pub use scalar::Scalar;
pub use strategy::{AnomalyGate, Side, StrategyConfig, StrategyRun, Trade};
pub use synthdata::SynthParams;

/// Default reporting precision.
pub type Real = f64;

pub type Profile = analysis::ProfileCurve<Real>;
pub type Probability = analysis::ProbabilityCurve<Real>;
pub type Drift = analysis::DriftSeries<Real>;
pub type Indicator = indicators::IndicatorSeries<Real>;
pub type Report = metrics::PerformanceReport<Real>;
pub type CumulativePoint = metrics::CumulativePoint<Real>;

pub type Profile32 = analysis::ProfileCurve<f32>;
pub type Report32 = metrics::PerformanceReport<f32>;
