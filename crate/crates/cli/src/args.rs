use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gotobi_core::{Minute, Price};

#[derive(Debug, Parser)]
#[command(
    name = "gotobi",
    version,
    about = "Gotobi-day statistics and backtests on minute USD/JPY quotes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List effective Gotobi days and matched control days.
    Calendar(CalendarArgs),
    /// Write a synthetic quote file with an injected Gotobi pattern.
    Generate(GenerateArgs),
    /// Anchored intraday profile, probability curve and post-fixing drift.
    Analyze(AnalyzeArgs),
    /// Run a strategy and report its trades and performance.
    Backtest(BacktestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct HolidayArgs {
    /// Holiday CSV (`date,name`); defaults to the bundled 2018-2020 Japanese list.
    #[arg(long, env = "GOTOBI_HOLIDAYS")]
    pub holidays: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Quote CSV (`timestamp,bid,ask` or `timestamp,price`).
    #[arg(long)]
    pub data: PathBuf,
    /// Constant spread for single-price data; bid and ask straddle the price.
    #[arg(long)]
    pub spread: Option<Price>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DaySet {
    Gotobi,
    NonGotobi,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyKind {
    H1,
    H2,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateArg {
    Anomaly,
    NoAnomaly,
    Always,
}

#[derive(Debug, Clone, Args)]
pub struct CalendarArgs {
    #[arg(long)]
    pub from: NaiveDate,
    #[arg(long)]
    pub to: NaiveDate,
    #[command(flatten)]
    pub holidays: HolidayArgs,
    /// Seed for drawing the matched non-Gotobi days.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Only list Gotobi labels; skip the control sample.
    #[arg(long)]
    pub no_sample: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub from: NaiveDate,
    #[arg(long)]
    pub to: NaiveDate,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Total rise from the anomaly start to the anchor on Gotobi days (yen).
    #[arg(long, default_value = "0.1")]
    pub drift: Price,
    /// Total fall from the anchor to the reversal end on Gotobi days (yen).
    #[arg(long, default_value = "0.06")]
    pub reversal: Price,
    /// Per-minute random-walk standard deviation (yen).
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value = "0.004")]
    pub spread: Price,
    #[arg(long, default_value = "108")]
    pub base_rate: Price,
    #[arg(long, default_value = "03:00")]
    pub anomaly_start: Minute,
    #[arg(long, default_value = "09:55")]
    pub anchor: Minute,
    #[arg(long, default_value = "12:00")]
    pub reversal_end: Minute,
    #[command(flatten)]
    pub holidays: HolidayArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub holidays: HolidayArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub day_set: DaySet,
    #[arg(long, default_value = "09:55")]
    pub anchor: Minute,
    /// Minutes after the anchor for the drift series.
    #[arg(long, default_value_t = 1)]
    pub horizon: u16,
    /// Seed for drawing the matched non-Gotobi days.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BacktestArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub holidays: HolidayArgs,
    #[arg(long, value_enum)]
    pub strategy: StrategyKind,
    /// Enter H1 on a golden cross (default for `combined`).
    #[arg(long, overrides_with = "no_gc")]
    pub gc: bool,
    /// Enter H1 at the fixed entry minute (default for `h1`).
    #[arg(long, overrides_with = "gc")]
    pub no_gc: bool,
    /// Golden-cross window is [n-1:30, n:00).
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub gc_hour: u8,
    #[arg(long, value_enum, default_value = "anomaly")]
    pub gate: GateArg,
    #[arg(long, value_enum, default_value = "gotobi")]
    pub day_set: DaySet,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "03:00")]
    pub entry: Minute,
    #[arg(long, default_value = "09:55")]
    pub exit: Minute,
    #[arg(long, default_value = "09:00")]
    pub gate_minute: Minute,
    #[arg(long, default_value = "09:55")]
    pub h2_entry: Minute,
    #[arg(long, default_value = "12:00")]
    pub h2_exit: Minute,
    #[arg(long, default_value_t = 25)]
    pub short_window: u16,
    #[arg(long, default_value_t = 100)]
    pub long_window: u16,
    #[arg(long)]
    pub out_dir: PathBuf,
}
