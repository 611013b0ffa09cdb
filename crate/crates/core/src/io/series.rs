use std::io::Write;

use super::IoError;
use crate::model::SimSeries;

/// Shortest decimal text that parses back to exactly `x`.
///
/// Plain notation for magnitudes in `[1e-5, 1e16)`, scientific otherwise,
/// so no value prints more than 17 significant digits.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Write `t,price,value,dbar,change,return` rows, one per period.
///
/// Row 0 carries the initial price, value and expectation with empty change
/// and return cells. Value and expectation cells are empty for the trend
/// regime.
pub fn write_series<W: Write>(series: &SimSeries, mut out: W) -> Result<(), IoError> {
    let opt = |v: &[f64], t: usize| v.get(t).map_or(String::new(), |x| format_number(*x));
    writeln!(out, "t,price,value,dbar,change,return")?;
    for (t, price) in series.prices.iter().enumerate() {
        let (change, ret) = if t == 0 {
            (String::new(), String::new())
        } else {
            (
                format_number(series.changes[t - 1]),
                format_number(series.returns[t - 1]),
            )
        };
        writeln!(
            out,
            "{t},{},{},{},{change},{ret}",
            format_number(*price),
            opt(&series.values, t),
            opt(&series.dbars, t),
        )?;
    }
    out.flush()?;
    Ok(())
}
