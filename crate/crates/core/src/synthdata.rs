//! Seeded synthetic minute quotes with an injected Gotobi pattern.
//!
//! Each Tuesday-to-Friday business day gets a full 00:00 to 23:59 series. The
//! mid is a Gaussian random walk from `base_rate`; on effective Gotobi days a
//! linear rise of `drift` is added between `anomaly_start` and `anchor`, and
//! a linear fall of `reversal` between `anchor` and `reversal_end`. The drift
//! path is integer micro-yen, so a noiseless day hits its targets exactly.
//!
//! Each day draws from its own ChaCha20 stream keyed by `(seed, date)`, so
//! days can be generated in any order or in parallel with identical output.

use chrono::{Datelike, NaiveDate};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::calendar::{effective_gotobi_dates_within, DateRange, TradingCalendar};
use crate::error::{Error, Result};
use crate::marketdata::{DaySeries, Minute, MinuteQuote, Price, MICROS_PER_UNIT};

/// Pinned identity of the random stream; echoed into run metadata.
pub const GENERATOR_ID: &str = "chacha20[key=seed_le64|days_from_ce_le32|0*20]/rand_distr-0.5-standard_normal/v1";

/// Lowest bid the generator will emit.
pub const PRICE_FLOOR: Price = Price::from_micros(1_000);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthParams {
    pub range: DateRange,
    pub base_rate: Price,
    /// Per-minute standard deviation of the walk, in yen.
    pub noise_sigma: f64,
    pub spread: Price,
    pub anomaly_start: Minute,
    pub anchor: Minute,
    pub reversal_end: Minute,
    /// Total rise over `[anomaly_start, anchor]` on Gotobi days.
    pub drift: Price,
    /// Total fall over `[anchor, reversal_end]` on Gotobi days.
    pub reversal: Price,
    pub seed: u64,
}

impl SynthParams {
    pub fn new(range: DateRange, seed: u64) -> Self {
        SynthParams {
            range,
            base_rate: Price::from_micros(108 * MICROS_PER_UNIT),
            noise_sigma: 0.0,
            spread: Price::from_micros(4_000),
            anomaly_start: Minute::at(3, 0),
            anchor: Minute::at(9, 55),
            reversal_end: Minute::at(12, 0),
            drift: Price::ZERO,
            reversal: Price::ZERO,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::argument(format!(
                "noise sigma must be finite and >= 0, got {}",
                self.noise_sigma
            )));
        }
        if self.spread < Price::ZERO {
            return Err(Error::argument(format!("spread must be >= 0, got {}", self.spread)));
        }
        if self.base_rate <= PRICE_FLOOR {
            return Err(Error::argument(format!(
                "base rate {} is below the price floor",
                self.base_rate
            )));
        }
        if !(self.anomaly_start < self.anchor && self.anchor < self.reversal_end) {
            return Err(Error::argument(format!(
                "need anomaly start ({}) < anchor ({}) < reversal end ({})",
                self.anomaly_start, self.anchor, self.reversal_end
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthData {
    pub days: Vec<DaySeries>,
    /// Dates that received the injected pattern.
    pub gotobi_days: Vec<NaiveDate>,
    /// Quotes whose bid was raised to [`PRICE_FLOOR`].
    pub clamped_quotes: usize,
}

/// Linear move of `total` over `[from, to]`: 0 at or before `from`, `total`
/// at or after `to`.
fn ramp(m: Minute, from: Minute, to: Minute, total: i64) -> i64 {
    let (m, a, b) = (m.index() as i64, from.index() as i64, to.index() as i64);
    if m <= a {
        0
    } else if m >= b {
        total
    } else {
        (total as i128 * (m - a) as i128 / (b - a) as i128) as i64
    }
}

pub fn day_rng(seed: u64, date: NaiveDate) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..12].copy_from_slice(&date.num_days_from_ce().to_le_bytes());
    ChaCha20Rng::from_seed(key)
}

/// One day of quotes. Returns the series and how many bids hit the floor.
pub fn generate_day(params: &SynthParams, date: NaiveDate, gotobi: bool) -> (DaySeries, usize) {
    let mut rng = day_rng(params.seed, date);
    let micros = MICROS_PER_UNIT as f64;
    let half = params.spread.micros() / 2;
    let mut walk = 0.0f64;
    let mut clamped = 0;
    let quotes = Minute::all()
        .map(|m| {
            if m.index() > 0 && params.noise_sigma > 0.0 {
                let z: f64 = StandardNormal.sample(&mut rng);
                walk += params.noise_sigma * z;
            }
            let mut mid = params.base_rate.micros() + (walk * micros).round() as i64;
            if gotobi {
                mid += ramp(m, params.anomaly_start, params.anchor, params.drift.micros())
                    - ramp(m, params.anchor, params.reversal_end, params.reversal.micros());
            }
            let mut bid = mid - half;
            if bid < PRICE_FLOOR.micros() {
                bid = PRICE_FLOOR.micros();
                clamped += 1;
            }
            let bid = Price::from_micros(bid);
            MinuteQuote::new(m, bid, bid + params.spread).expect("bid above floor, spread >= 0")
        })
        .collect();
    (DaySeries::new(date, quotes).expect("all minutes in order"), clamped)
}

/// Synthetic data for every Tuesday-to-Friday business day in the range.
pub fn generate(params: &SynthParams, cal: &TradingCalendar) -> Result<SynthData> {
    params.validate()?;
    let gotobi = effective_gotobi_dates_within(params.range, cal)?;
    let dates: Vec<NaiveDate> = params.range.days().filter(|d| cal.is_sampling_day(*d)).collect();
    let generated: Vec<(DaySeries, usize)> = dates
        .par_iter()
        .map(|d| generate_day(params, *d, gotobi.contains(d)))
        .collect();
    let clamped_quotes = generated.iter().map(|(_, c)| c).sum();
    if clamped_quotes > 0 {
        log::warn!("{clamped_quotes} synthetic quotes were clamped to the price floor {PRICE_FLOOR}");
    }
    Ok(SynthData {
        days: generated.into_iter().map(|(d, _)| d).collect(),
        gotobi_days: dates.into_iter().filter(|d| gotobi.contains(d)).collect(),
        clamped_quotes,
    })
}
