//! Properties of the strategy and analysis layers on generated data.

use chrono::NaiveDate;
use gotobi_core::analysis::{intraday_profile, post_announcement_drift, prob_above_anchor};
use gotobi_core::strategy::{run_combined, run_h1, run_h2, Leg};
use gotobi_core::synthdata::generate;
use gotobi_core::{
    AnomalyGate, DateRange, DaySeries, Minute, MinuteQuote, Price, StrategyConfig, SynthParams, TradingCalendar,
};
use proptest::prelude::*;

const ANCHOR: Minute = Minute::at(9, 55);

fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn synth(sigma: f64, spread: i64, seed: u64, from: NaiveDate, to: NaiveDate) -> (Vec<DaySeries>, Vec<NaiveDate>) {
    let params = SynthParams {
        noise_sigma: sigma,
        spread: Price::from_micros(spread),
        drift: Price::from_micros(100_000),
        reversal: Price::from_micros(60_000),
        ..SynthParams::new(DateRange::new(from, to).unwrap(), seed)
    };
    let data = generate(&params, &TradingCalendar::bundled()).unwrap();
    (data.days, data.gotobi_days)
}

/// Rebuilds every quote with a wider spread, moving bid and ask apart by the
/// same amount.
fn widen(days: &[DaySeries], half_delta: i64) -> Vec<DaySeries> {
    days.iter()
        .map(|d| {
            let quotes = d
                .quotes()
                .iter()
                .map(|q| {
                    MinuteQuote::new(
                        q.minute,
                        q.bid - Price::from_micros(half_delta),
                        q.ask + Price::from_micros(half_delta),
                    )
                    .unwrap()
                })
                .collect();
            DaySeries::new(d.date(), quotes).unwrap()
        })
        .collect()
}

#[test]
fn zero_spread_flat_day_has_zero_profit() {
    let (days, _) = synth(0.0, 0, 1, ymd(2019, 6, 1), ymd(2019, 6, 30));
    let flat: Vec<DaySeries> = days
        .into_iter()
        .filter(|d| d.quotes().iter().all(|q| q.mid2_micros() == 216_000_000))
        .collect();
    assert!(!flat.is_empty());
    let cfg = StrategyConfig::default();
    let h1 = run_h1(&flat, &cfg).unwrap();
    let h2 = run_h2(&flat, &cfg, AnomalyGate::Always).unwrap();
    assert!(h1.trades.iter().chain(&h2.trades).all(|t| t.profit == Price::ZERO));
}

#[test]
fn spread_shifts_each_profit_by_delta() {
    let (days, _) = synth(0.01, 4_000, 5, ymd(2019, 1, 1), ymd(2019, 3, 31));
    let wide = widen(&days, 1_500);
    let cfg = StrategyConfig::default();
    for gate in [AnomalyGate::Always] {
        let narrow = run_h2(&days, &cfg, gate).unwrap();
        let broad = run_h2(&wide, &cfg, gate).unwrap();
        for (a, b) in narrow.trades.iter().zip(&broad.trades) {
            assert_eq!(a.profit - b.profit, Price::from_micros(3_000));
        }
    }
    let narrow = run_h1(&days, &cfg).unwrap();
    let broad = run_h1(&wide, &cfg).unwrap();
    assert_eq!(narrow.trades.len(), broad.trades.len());
    for (a, b) in narrow.trades.iter().zip(&broad.trades) {
        assert_eq!(a.profit - b.profit, Price::from_micros(3_000));
    }
}

#[test]
fn short_mirrors_long_at_zero_spread() {
    let (days, _) = synth(0.02, 0, 9, ymd(2019, 1, 1), ymd(2019, 2, 28));
    let cfg = StrategyConfig::default();
    let shorts = run_h2(&days, &cfg, AnomalyGate::Always).unwrap();
    for (s, d) in shorts.trades.iter().zip(&days) {
        let hypothetical = d.rate_at(cfg.h2_exit_minute).unwrap().bid - d.rate_at(cfg.h2_entry_minute).unwrap().ask;
        assert_eq!(s.profit, -hypothetical);
    }
    assert_eq!(shorts.trades.len(), days.len());
}

#[test]
fn trade_count_reconciles_with_skips() {
    let (mut days, _) = synth(0.01, 4_000, 3, ymd(2018, 1, 1), ymd(2018, 12, 31));
    // knock out the 09:55 quote on a handful of days
    for d in days.iter_mut().step_by(17) {
        let quotes = d.quotes().iter().copied().filter(|q| q.minute != ANCHOR).collect();
        *d = DaySeries::new(d.date(), quotes).unwrap();
    }
    for use_gc in [false, true] {
        let cfg = StrategyConfig {
            use_gc,
            ..Default::default()
        };
        let run = run_h1(&days, &cfg).unwrap();
        assert_eq!(run.trades.len() + run.skipped.len(), days.len());
        assert!(run.trades.iter().all(|t| t.entry_minute < t.exit_minute));
    }
}

#[test]
fn combined_at_most_two_per_day_and_shorts_are_gated() {
    let (days, _) = synth(0.01, 4_000, 4, ymd(2018, 1, 1), ymd(2018, 12, 31));
    let cfg = StrategyConfig {
        use_gc: true,
        ..Default::default()
    };
    let run = run_combined(&days, &cfg).unwrap();
    let mut per_day = std::collections::BTreeMap::<NaiveDate, usize>::new();
    for t in &run.trades {
        *per_day.entry(t.date).or_default() += 1;
    }
    assert!(per_day.values().all(|&n| n <= 2));
    for t in run.trades.iter().filter(|t| t.side == gotobi_core::Side::Short) {
        let day = days.iter().find(|d| d.date() == t.date).unwrap();
        let long = run
            .trades
            .iter()
            .find(|x| x.date == t.date && x.side == gotobi_core::Side::Long);
        let from = long.map_or(cfg.entry_minute_h1, |l| l.entry_minute);
        assert!(day.mid::<f64>(cfg.gate_minute) > day.mid::<f64>(from));
    }
    // each day is either traded or itemized, per leg
    for leg in [Leg::H1, Leg::H2] {
        let skipped = run.skipped.iter().filter(|s| s.leg == leg).count();
        let side = if leg == Leg::H1 {
            gotobi_core::Side::Long
        } else {
            gotobi_core::Side::Short
        };
        let traded = run.trades.iter().filter(|t| t.side == side).count();
        assert_eq!(skipped + traded, days.len());
    }
    let mut sorted = run.trades.clone();
    sorted.sort_by_key(|t| (t.date, t.entry_minute));
    assert_eq!(sorted, run.trades);
}

trait MidAt {
    fn mid<T: gotobi_core::Scalar>(&self, m: Minute) -> T;
}

impl MidAt for DaySeries {
    fn mid<T: gotobi_core::Scalar>(&self, m: Minute) -> T {
        self.mid_at(m).unwrap()
    }
}

#[test]
fn noiseless_reversal_accumulates_linearly() {
    let (days, gotobi) = synth(0.0, 4_000, 8, ymd(2018, 1, 1), ymd(2018, 6, 30));
    let g: Vec<DaySeries> = days.into_iter().filter(|d| gotobi.contains(&d.date())).collect();
    // 0.06 over 125 minutes: 480 micro-yen in the first minute
    let drift = post_announcement_drift::<f64>(&g, ANCHOR, 1).unwrap();
    for (k, c) in drift.cumulative.iter().enumerate() {
        assert!((c + 0.00048 * (k + 1) as f64).abs() < 1e-9);
    }
    let full = post_announcement_drift::<f64>(&g, ANCHOR, 125).unwrap();
    assert!(full.per_day.iter().all(|&v| v == -0.06));
}

#[test]
fn profile_recovers_drift_and_controls_stay_flat() {
    let (days, gotobi) = synth(0.005, 4_000, 12, ymd(2015, 1, 1), ymd(2020, 12, 31));
    let (g, n): (Vec<DaySeries>, Vec<DaySeries>) = days.into_iter().partition(|d| gotobi.contains(&d.date()));
    let at3 = Minute::at(3, 0);
    // noise at 03:00 relative to 09:55: 0.005 * sqrt(415) per day
    let tol = |count: usize| 4.0 * 0.005 * 415f64.sqrt() / (count as f64).sqrt();
    let pg = intraday_profile::<f64>(&g, ANCHOR).unwrap();
    assert!((pg.offset_at(at3).unwrap() + 0.10).abs() < tol(g.len()));
    let pn = intraday_profile::<f64>(&n, ANCHOR).unwrap();
    assert!(pn.offset_at(at3).unwrap().abs() < tol(n.len()));
    assert_eq!(pg.offset_at(ANCHOR), Some(0.0));
    let prob = prob_above_anchor::<f64>(&g, ANCHOR).unwrap();
    assert_eq!(prob.prob_at(ANCHOR), Some(0.0));
    assert!(prob.prob.iter().all(|p| (0.0..=1.0).contains(p)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn analysis_ignores_day_order(seed in any::<u64>(), rot in 0usize..40) {
        let (mut days, _) = synth(0.01, 4_000, seed, ymd(2019, 4, 1), ymd(2019, 5, 31));
        let a = intraday_profile::<f64>(&days, ANCHOR).unwrap();
        let pa = prob_above_anchor::<f64>(&days, ANCHOR).unwrap();
        let da = post_announcement_drift::<f64>(&days, ANCHOR, 1).unwrap();
        let k = rot % days.len();
        days.rotate_left(k);
        days.reverse();
        prop_assert_eq!(a, intraday_profile::<f64>(&days, ANCHOR).unwrap());
        prop_assert_eq!(pa, prob_above_anchor::<f64>(&days, ANCHOR).unwrap());
        prop_assert_eq!(da, post_announcement_drift::<f64>(&days, ANCHOR, 1).unwrap());
    }

    #[test]
    fn strategy_output_ignores_day_order(seed in any::<u64>()) {
        let (mut days, _) = synth(0.01, 4_000, seed, ymd(2019, 4, 1), ymd(2019, 5, 31));
        let cfg = StrategyConfig { use_gc: true, ..Default::default() };
        let a = run_combined(&days, &cfg).unwrap();
        days.reverse();
        prop_assert_eq!(a, run_combined(&days, &cfg).unwrap());
    }
}
