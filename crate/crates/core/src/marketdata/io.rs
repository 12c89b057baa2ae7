use std::io::{Read, Write};

use chrono::NaiveDate;

use super::{DaySeries, Minute, MinuteQuote, Price};
use crate::error::{Error, Result};

/// How to read a quote file.
///
/// Three-column files (`timestamp,bid,ask`) are read as-is. Two-column files
/// (`timestamp,price`) need `spread`, and quotes are synthesized around the
/// price with `ask - bid == spread` exactly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CsvSpec {
    pub spread: Option<Price>,
}

impl CsvSpec {
    pub fn with_spread(spread: Price) -> Self {
        CsvSpec { spread: Some(spread) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    BidAsk,
    SinglePrice(Price),
}

/// Parses a quote CSV into per-day series, ascending by date.
///
/// Rows may arrive in any order. A repeated `(date, minute)` is rejected and
/// the error names the line of the second occurrence.
pub fn load_quotes<R: Read>(source: R, spec: &CsvSpec) -> Result<Vec<DaySeries>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);

    let header = reader.headers().map_err(|e| csv_error(e, 1))?.clone();
    if header.is_empty() {
        return Ok(Vec::new());
    }
    let columns: Vec<String> = header.iter().map(|c| c.trim().to_ascii_lowercase()).collect();
    let layout = match columns.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["timestamp", "bid", "ask"] => {
            if spec.spread.is_some() {
                return Err(Error::argument(
                    "a constant spread only applies to single-price (timestamp,price) data",
                ));
            }
            Layout::BidAsk
        }
        ["timestamp", "price"] => match spec.spread {
            Some(s) if s.micros() >= 0 => Layout::SinglePrice(s),
            Some(s) => return Err(Error::argument(format!("negative spread {s}"))),
            None => return Err(Error::argument("single-price data (timestamp,price) requires a spread")),
        },
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "unexpected header {:?}, expected timestamp,bid,ask or timestamp,price",
                    header.iter().collect::<Vec<_>>().join(",")
                ),
            })
        }
    };
    let width = match layout {
        Layout::BidAsk => 3,
        Layout::SinglePrice(_) => 2,
    };

    let mut rows: Vec<(NaiveDate, MinuteQuote, u64)> = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line_hint = reader.position().line();
        match reader.read_record(&mut record) {
            Ok(true) => {}
            Ok(false) => break,
            Err(e) => return Err(csv_error(e, line_hint)),
        }
        let line = record.position().map_or(line_hint, |p| p.line());
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        if record.len() != width {
            return Err(Error::Parse {
                line,
                message: format!("expected {width} columns, found {}", record.len()),
            });
        }
        let (date, minute) = parse_timestamp(record[0].trim()).ok_or_else(|| Error::Parse {
            line,
            message: format!("invalid timestamp {:?}, expected YYYY-MM-DDTHH:MM", &record[0]),
        })?;
        let price = |field: &str| -> Result<Price> {
            field.trim().parse::<Price>().map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })
        };
        let (bid, ask) = match layout {
            Layout::BidAsk => (price(&record[1])?, price(&record[2])?),
            Layout::SinglePrice(spread) => {
                let p = price(&record[1])?;
                let bid = p - Price::from_micros(spread.micros() / 2);
                (bid, bid + spread)
            }
        };
        let quote = MinuteQuote::new(minute, bid, ask).map_err(|e| Error::Validation {
            line,
            message: match e {
                Error::Argument(m) => m,
                other => other.to_string(),
            },
        })?;
        rows.push((date, quote, line));
    }

    rows.sort_by_key(|(date, q, line)| (*date, q.minute, *line));
    if let Some(w) = rows
        .windows(2)
        .find(|w| w[0].0 == w[1].0 && w[0].1.minute == w[1].1.minute)
    {
        return Err(Error::Validation {
            line: w[1].2,
            message: format!(
                "duplicate timestamp {}T{} (first seen on line {})",
                w[1].0, w[1].1.minute, w[0].2
            ),
        });
    }

    let mut days = Vec::new();
    let mut current: Option<(NaiveDate, Vec<MinuteQuote>)> = None;
    for (date, quote, _) in rows {
        match &mut current {
            Some((d, quotes)) if *d == date => quotes.push(quote),
            _ => {
                if let Some((d, quotes)) = current.take() {
                    days.push(DaySeries::new(d, quotes)?);
                }
                current = Some((date, vec![quote]));
            }
        }
    }
    if let Some((d, quotes)) = current {
        days.push(DaySeries::new(d, quotes)?);
    }
    Ok(days)
}

/// Writes days in the three-column format accepted by [`load_quotes`].
pub fn write_quotes<W: Write>(mut out: W, days: &[DaySeries]) -> Result<()> {
    out.write_all(b"timestamp,bid,ask\n")?;
    for day in days {
        let date = day.date().format("%Y-%m-%d");
        for q in day.quotes() {
            writeln!(out, "{date}T{},{},{}", q.minute, q.bid, q.ask)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn parse_timestamp(s: &str) -> Option<(NaiveDate, Minute)> {
    if s.len() != 16 || s.as_bytes()[10] != b'T' {
        return None;
    }
    let date = NaiveDate::parse_from_str(&s[..10], "%Y-%m-%d").ok()?;
    let minute = s[11..].parse().ok()?;
    Some((date, minute))
}

fn csv_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::Parse {
        line,
        message: e.to_string(),
    }
}
