use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use chrono::NaiveDate;
use gotobi_core::analysis::{intraday_profile, post_announcement_drift, prob_above_anchor};
use gotobi_core::calendar::{
    effective_gotobi_dates_within, effective_gotobi_days, eligible_non_gotobi, sample_from_pool, sample_non_gotobi,
};
use gotobi_core::marketdata::{load_quotes, write_quotes};
use gotobi_core::metrics::evaluate_run;
use gotobi_core::strategy::{run_combined, run_h1, run_h2};
use gotobi_core::synthdata::{generate, GENERATOR_ID};
use gotobi_core::{
    AnomalyGate, CsvSpec, DateRange, DayKind, DayLabel, DaySeries, Drift, Probability, Profile, Report, StrategyConfig,
    StrategyRun, SynthParams, Trade, TradingCalendar,
};
use log::{info, warn};
use serde_json::{json, Value};

use crate::args::{AnalyzeArgs, BacktestArgs, CalendarArgs, DaySet, GateArg, GenerateArgs, HolidayArgs, StrategyKind};
use crate::error::CliError;
use crate::manifest::{sha256_hex, InputRecord, RunManifest};

const MANIFEST_FILE: &str = "manifest.json";

pub(crate) fn load_calendar(args: &HolidayArgs) -> Result<(TradingCalendar, InputRecord), CliError> {
    match &args.holidays {
        Some(path) => {
            let bytes = fs::read(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
            let cal = TradingCalendar::from_holiday_csv(bytes.as_slice())
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            Ok((
                cal,
                InputRecord {
                    role: "holidays".into(),
                    path: path.display().to_string(),
                    sha256: sha256_hex(&bytes),
                },
            ))
        }
        None => Ok((
            TradingCalendar::bundled(),
            InputRecord {
                role: "holidays".into(),
                path: "<bundled>".into(),
                sha256: sha256_hex(bundled_holiday_text().as_bytes()),
            },
        )),
    }
}

fn bundled_holiday_text() -> String {
    let cal = TradingCalendar::bundled();
    cal.holidays().iter().map(|d| format!("{d}\n")).collect()
}

fn load_data(path: &Path, spread: Option<gotobi_core::Price>) -> Result<(Vec<DaySeries>, InputRecord), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let days = load_quotes(bytes.as_slice(), &CsvSpec { spread }).map_err(|e| match e {
        gotobi_core::Error::Argument(m) => CliError::Usage(format!("{}: {m}", path.display())),
        other => CliError::Data(format!("{}: {other}", path.display())),
    })?;
    Ok((
        days,
        InputRecord {
            role: "data".into(),
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        },
    ))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))
}

/// Days of the data set split into Gotobi days and a matched control sample.
#[derive(Debug)]
pub struct Selection {
    pub gotobi: Vec<DaySeries>,
    pub non_gotobi: Vec<DaySeries>,
}

/// Labels the loaded days and, when `with_controls` is set, draws as many
/// control days as there are Gotobi days from the control-eligible days
/// present in the data.
pub fn select_days(
    days: Vec<DaySeries>,
    cal: &TradingCalendar,
    seed: u64,
    with_controls: bool,
) -> Result<Selection, CliError> {
    let (first, last) = match (days.first(), days.last()) {
        (Some(a), Some(b)) => (a.date(), b.date()),
        _ => return Err(CliError::Data("data file contains no quotes".into())),
    };
    let span = DateRange::new(first, last)?;
    let gotobi_dates = effective_gotobi_dates_within(span, cal)?;
    let present: BTreeSet<NaiveDate> = days.iter().map(DaySeries::date).collect();
    let pool: Vec<NaiveDate> = eligible_non_gotobi(span, cal)?
        .into_iter()
        .filter(|d| present.contains(d))
        .collect();
    let n_gotobi = days.iter().filter(|d| gotobi_dates.contains(&d.date())).count();
    let controls: BTreeSet<NaiveDate> = if with_controls {
        sample_from_pool(&pool, n_gotobi, seed)?.into_iter().collect()
    } else {
        BTreeSet::new()
    };
    let mut sel = Selection {
        gotobi: Vec::new(),
        non_gotobi: Vec::new(),
    };
    for day in days {
        if gotobi_dates.contains(&day.date()) {
            sel.gotobi.push(day);
        } else if controls.contains(&day.date()) {
            sel.non_gotobi.push(day);
        }
    }
    info!(
        "{} Gotobi days, {} control days",
        sel.gotobi.len(),
        sel.non_gotobi.len()
    );
    Ok(sel)
}

fn sets(choice: DaySet) -> &'static [(&'static str, bool)] {
    match choice {
        DaySet::Gotobi => &[("gotobi", true)],
        DaySet::NonGotobi => &[("non_gotobi", false)],
        DaySet::Both => &[("gotobi", true), ("non_gotobi", false)],
    }
}

// ---------------------------------------------------------------------------
// calendar

pub struct CalendarListing {
    pub labels: Vec<DayLabel>,
    pub csv: String,
}

pub fn cmd_calendar(args: &CalendarArgs) -> Result<CalendarListing, CliError> {
    let range = DateRange::new(args.from, args.to)?;
    let (cal, _) = load_calendar(&args.holidays)?;
    let mut labels = effective_gotobi_days(range, &cal)?;
    let n_gotobi = labels.iter().filter(|l| l.kind == DayKind::GotobiEffective).count();
    if !args.no_sample {
        for date in sample_non_gotobi(range, n_gotobi, &cal, args.seed)? {
            labels.push(DayLabel {
                date,
                kind: DayKind::NonGotobi,
                source_gotobi: None,
            });
        }
        labels.sort_by_key(|l| l.date);
    }
    let mut csv = String::from("date,kind,source_gotobi\n");
    for l in &labels {
        let source = l.source_gotobi.map(|d| d.to_string()).unwrap_or_default();
        writeln!(csv, "{},{},{}", l.date, l.kind.as_str(), source).expect("write to string");
    }
    let count = |k: DayKind| labels.iter().filter(|l| l.kind == k).count();
    eprintln!(
        "gotobi={} excluded={} non_gotobi={}",
        count(DayKind::GotobiEffective),
        count(DayKind::Excluded),
        count(DayKind::NonGotobi)
    );
    match &args.out {
        Some(path) => fs::write(path, &csv).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?,
        None => std::io::stdout()
            .write_all(csv.as_bytes())
            .map_err(|e| CliError::io("writing stdout", e))?,
    }
    Ok(CalendarListing { labels, csv })
}

// ---------------------------------------------------------------------------
// generate

pub fn cmd_generate(args: &GenerateArgs) -> Result<usize, CliError> {
    let (cal, holidays) = load_calendar(&args.holidays)?;
    let params = SynthParams {
        base_rate: args.base_rate,
        noise_sigma: args.sigma,
        spread: args.spread,
        anomaly_start: args.anomaly_start,
        anchor: args.anchor,
        reversal_end: args.reversal_end,
        drift: args.drift,
        reversal: args.reversal,
        ..SynthParams::new(DateRange::new(args.from, args.to)?, args.seed)
    };
    let data = generate(&params, &cal)?;
    let mut config = serde_json::to_value(params)?;
    config["generator"] = json!(GENERATOR_ID);
    let mut manifest = RunManifest::new("generate", config, Some(args.seed), vec![holidays]);

    let mut buf = Vec::new();
    write_quotes(&mut buf, &data.days)?;
    let dir = args
        .out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    create_dir(dir)?;
    let name = args
        .out
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} is not a file path", args.out.display())))?
        .to_string_lossy()
        .into_owned();
    manifest.emit(dir, &name, &buf)?;
    if data.clamped_quotes > 0 {
        warn!("{} quotes clamped at the price floor", data.clamped_quotes);
    }
    manifest.config["clamped_quotes"] = json!(data.clamped_quotes);
    manifest.config["gotobi_days"] = json!(data.gotobi_days.len());
    manifest.finish(&dir.join(format!("{name}.manifest.json")))?;
    Ok(data.days.len())
}

// ---------------------------------------------------------------------------
// analyze

fn curve_csv(minutes: &[gotobi_core::Minute], values: &[f64], n: &[usize]) -> String {
    let mut s = String::from("minute,value,n_days\n");
    for ((m, v), k) in minutes.iter().zip(values).zip(n) {
        writeln!(s, "{m},{v},{k}").expect("write to string");
    }
    s
}

fn drift_csv(d: &Drift) -> String {
    let mut s = String::from("date,per_day,cumulative\n");
    for ((date, v), c) in d.dates.iter().zip(&d.per_day).zip(&d.cumulative) {
        writeln!(s, "{date},{v},{c}").expect("write to string");
    }
    s
}

pub struct AnalysisOutput {
    pub set: &'static str,
    pub profile: Profile,
    pub probability: Probability,
    pub drift: Drift,
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<Vec<AnalysisOutput>, CliError> {
    let (cal, holidays) = load_calendar(&args.holidays)?;
    let (days, data) = load_data(&args.data.data, args.data.spread)?;
    let selection = select_days(days, &cal, args.seed, args.day_set != DaySet::Gotobi)?;
    let config = json!({
        "day_set": format!("{:?}", args.day_set).to_lowercase(),
        "anchor": args.anchor,
        "horizon": args.horizon,
        "spread": args.data.spread,
    });
    let mut manifest = RunManifest::new("analyze", config, Some(args.seed), vec![data, holidays]);
    create_dir(&args.out_dir)?;

    let mut outputs = Vec::new();
    let mut envelope_sets = serde_json::Map::new();
    for &(name, gotobi) in sets(args.day_set) {
        let days = if gotobi {
            &selection.gotobi
        } else {
            &selection.non_gotobi
        };
        let profile = intraday_profile::<f64>(days, args.anchor)?;
        let probability = prob_above_anchor::<f64>(days, args.anchor)?;
        let drift = post_announcement_drift::<f64>(days, args.anchor, args.horizon)?;
        manifest.emit(
            &args.out_dir,
            &format!("profile_{name}.csv"),
            curve_csv(&profile.minutes, &profile.mean_offset, &profile.n_days).as_bytes(),
        )?;
        manifest.emit(
            &args.out_dir,
            &format!("probability_{name}.csv"),
            curve_csv(&probability.minutes, &probability.prob, &probability.n_days).as_bytes(),
        )?;
        manifest.emit(
            &args.out_dir,
            &format!("drift_{name}.csv"),
            drift_csv(&drift).as_bytes(),
        )?;
        envelope_sets.insert(
            name.to_owned(),
            json!({
                "days": days.len(),
                "days_with_anchor": days.len() - profile.skipped.len(),
                "skipped_missing_anchor": profile.skipped,
                "drift_days": drift.dates.len(),
                "skipped_missing_drift_quotes": drift.skipped,
                "drift_total": drift.total(),
            }),
        );
        outputs.push(AnalysisOutput {
            set: name,
            profile,
            probability,
            drift,
        });
    }
    let envelope = json!({
        "manifest_digest": manifest.digest,
        "anchor": args.anchor,
        "horizon": args.horizon,
        "seed": args.seed,
        "sets": Value::Object(envelope_sets),
    });
    manifest.emit(&args.out_dir, "analysis.json", pretty(&envelope)?.as_bytes())?;
    manifest.finish(&args.out_dir.join(MANIFEST_FILE))?;
    Ok(outputs)
}

// ---------------------------------------------------------------------------
// backtest

pub fn trades_csv(trades: &[Trade]) -> String {
    let mut s = String::from("date,side,entry_minute,exit_minute,entry_price,exit_price,profit\n");
    for t in trades {
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            t.date, t.side, t.entry_minute, t.exit_minute, t.entry_price, t.exit_price, t.profit
        )
        .expect("write to string");
    }
    s
}

fn strategy_config(args: &BacktestArgs) -> StrategyConfig {
    let use_gc = match (args.gc, args.no_gc) {
        (true, _) => true,
        (_, true) => false,
        _ => args.strategy == StrategyKind::Combined,
    };
    StrategyConfig {
        use_gc,
        gc_hour: args.gc_hour,
        entry_minute_h1: args.entry,
        exit_minute_h1: args.exit,
        gate_minute: args.gate_minute,
        h2_entry_minute: args.h2_entry,
        h2_exit_minute: args.h2_exit,
        short_window: args.short_window,
        long_window: args.long_window,
    }
}

fn gate(arg: GateArg) -> AnomalyGate {
    match arg {
        GateArg::Anomaly => AnomalyGate::OnlyWhenAnomaly,
        GateArg::NoAnomaly => AnomalyGate::OnlyWhenNoAnomaly,
        GateArg::Always => AnomalyGate::Always,
    }
}

pub fn run_strategy(
    kind: StrategyKind,
    days: &[DaySeries],
    cfg: &StrategyConfig,
    gate_arg: GateArg,
) -> Result<StrategyRun, CliError> {
    Ok(match kind {
        StrategyKind::H1 => run_h1(days, cfg)?,
        StrategyKind::H2 => run_h2(days, cfg, gate(gate_arg))?,
        StrategyKind::Combined => run_combined(days, cfg)?,
    })
}

pub struct BacktestOutput {
    pub set: &'static str,
    pub report: Report,
}

pub fn cmd_backtest(args: &BacktestArgs) -> Result<Vec<BacktestOutput>, CliError> {
    let cfg = strategy_config(args);
    cfg.validate()?;
    let (cal, holidays) = load_calendar(&args.holidays)?;
    let (days, data) = load_data(&args.data.data, args.data.spread)?;
    let selection = select_days(days, &cal, args.seed, args.day_set != DaySet::Gotobi)?;
    let strategy = format!("{:?}", args.strategy).to_lowercase();
    let gate_name = format!("{:?}", gate(args.gate));
    let config = json!({
        "strategy": strategy,
        "day_set": format!("{:?}", args.day_set).to_lowercase(),
        "use_gc": cfg.use_gc,
        "gc_hour": cfg.gc_hour,
        "gc_window": [cfg.gc_window().start, cfg.gc_window().end],
        "gate": gate_name,
        "entry_minute_h1": cfg.entry_minute_h1,
        "exit_minute_h1": cfg.exit_minute_h1,
        "gate_minute": cfg.gate_minute,
        "h2_entry_minute": cfg.h2_entry_minute,
        "h2_exit_minute": cfg.h2_exit_minute,
        "short_window": cfg.short_window,
        "long_window": cfg.long_window,
        "spread": args.data.spread,
    });
    let mut manifest = RunManifest::new("backtest", config, Some(args.seed), vec![data, holidays]);
    create_dir(&args.out_dir)?;

    let mut outputs = Vec::new();
    for &(name, gotobi) in sets(args.day_set) {
        let days = if gotobi {
            &selection.gotobi
        } else {
            &selection.non_gotobi
        };
        let run = run_strategy(args.strategy, days, &cfg, args.gate)?;
        let report = evaluate_run::<f64>(&run);
        info!(
            "{name}: N={} W={:.3} total={}",
            report.n_trades, report.win_rate, report.total
        );
        manifest.emit(
            &args.out_dir,
            &format!("trades_{name}.csv"),
            trades_csv(&report.trades).as_bytes(),
        )?;
        let mut body = serde_json::to_value(&report)?;
        let obj = body.as_object_mut().expect("report serializes to an object");
        obj.insert("manifest_digest".into(), json!(manifest.digest));
        obj.insert("strategy".into(), json!(strategy));
        obj.insert("day_set".into(), json!(name));
        obj.insert("days_considered".into(), json!(run.days_considered));
        manifest.emit(&args.out_dir, &format!("report_{name}.json"), pretty(&body)?.as_bytes())?;
        outputs.push(BacktestOutput { set: name, report });
    }
    manifest.finish(&args.out_dir.join(MANIFEST_FILE))?;
    Ok(outputs)
}

fn pretty(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}
