//! Report documents and plot-ready tables.
//!
//! A report document is the line `schema=1` followed by a JSON object. The
//! object is the serde form of [`ScenarioReport`] or [`AnalysisReport`];
//! statistics that could not be computed appear as
//! `{"unavailable": "<reason>"}` in place of `{"value": ...}`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::series::format_number;
use super::{IoError, PriceTable};
use crate::experiment::{ScenarioReport, SeriesStats};
use crate::model::{returns_from_prices, SimSeries};
use crate::stats::TailCurve;

pub const SCHEMA_LINE: &str = "schema=1";

/// Statistics of an empirical price series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub column: String,
    pub rows: usize,
    pub first_label: String,
    pub last_label: String,
    pub max_lag: usize,
    pub min_tail: usize,
    /// Statistics of returns; the tail fit uses absolute returns in percent.
    pub returns: SeriesStats,
}

pub fn analyze_prices(
    table: &PriceTable,
    max_lag: usize,
    min_tail: usize,
) -> Result<AnalysisReport, IoError> {
    let returns = returns_from_prices(&table.prices)?;
    Ok(AnalysisReport {
        column: table.column.clone(),
        rows: table.len(),
        first_label: table.labels.first().cloned().unwrap_or_default(),
        last_label: table.labels.last().cloned().unwrap_or_default(),
        max_lag,
        min_tail,
        returns: SeriesStats::compute(&returns, 100.0, max_lag, min_tail),
    })
}

fn write_document<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<(), IoError> {
    writeln!(out, "{SCHEMA_LINE}")?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn read_document<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    let (first, rest) = text.split_once('\n').ok_or(IoError::Schema)?;
    if first.trim() != SCHEMA_LINE {
        return Err(IoError::Schema);
    }
    Ok(serde_json::from_str(rest)?)
}

pub fn write_report<W: Write>(report: &ScenarioReport, out: W) -> Result<(), IoError> {
    write_document(report, out)
}

pub fn read_report(text: &str) -> Result<ScenarioReport, IoError> {
    read_document(text)
}

pub fn write_analysis<W: Write>(report: &AnalysisReport, out: W) -> Result<(), IoError> {
    write_document(report, out)
}

pub fn read_analysis(text: &str) -> Result<AnalysisReport, IoError> {
    read_document(text)
}

/// `x,survival,log10_x,log10_survival`.
pub fn write_tail_table<W: Write>(curve: &TailCurve, mut out: W) -> Result<(), IoError> {
    writeln!(out, "x,survival,log10_x,log10_survival")?;
    for (x, s) in curve.x.iter().zip(&curve.survival) {
        writeln!(
            out,
            "{},{},{},{}",
            format_number(*x),
            format_number(*s),
            format_number(x.log10()),
            format_number(s.log10())
        )?;
    }
    out.flush()?;
    Ok(())
}

/// `lag,acf,acf_abs,band` from a report's cross-seed mean curves.
pub fn write_acf_table<W: Write>(report: &ScenarioReport, mut out: W) -> Result<(), IoError> {
    let agg = &report.aggregate;
    let band = agg.band.map(format_number).unwrap_or_default();
    writeln!(out, "lag,acf,acf_abs,band")?;
    let len = agg.mean_acf.len().max(agg.mean_acf_abs.len());
    for h in 0..len {
        let cell = |v: &[f64]| v.get(h).map(|x| format_number(*x)).unwrap_or_default();
        writeln!(
            out,
            "{h},{},{},{band}",
            cell(&agg.mean_acf),
            cell(&agg.mean_acf_abs)
        )?;
    }
    out.flush()?;
    Ok(())
}

/// `t,price,value,return,return_percent` for drawing the price and
/// return panels of one run.
pub fn write_path_table<W: Write>(series: &SimSeries, mut out: W) -> Result<(), IoError> {
    writeln!(out, "t,price,value,return,return_percent")?;
    for (t, price) in series.prices.iter().enumerate() {
        let value = series
            .values
            .get(t)
            .map(|v| format_number(*v))
            .unwrap_or_default();
        let (r, pct) = match t.checked_sub(1).and_then(|i| series.returns.get(i)) {
            Some(r) => (format_number(*r), format_number(r * 100.0)),
            None => (String::new(), String::new()),
        };
        writeln!(out, "{t},{},{value},{r},{pct}", format_number(*price))?;
    }
    out.flush()?;
    Ok(())
}
