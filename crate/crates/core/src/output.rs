//! CSV and JSON serialization of sweep rows.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sweep::SweepRow;

pub const CSV_HEADER: &str =
    "scheme,relay_count,mer_db,alpha_si,alpha_id,alpha_ie,analytic,mc_p_hat,mc_ci_low,mc_ci_high,trials,seed";

/// Significant digits printed for probabilities in CSV output.
pub const PROBABILITY_DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Formats `x` with `digits` significant digits in the style of C's `%g`:
/// fixed notation for moderate exponents, scientific otherwise, trailing
/// zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    // Round first so the exponent reflects carries such as 9.99..→10.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn probability(p: Option<f64>) -> String {
    p.map(|p| format_significant(p, PROBABILITY_DIGITS))
        .unwrap_or_default()
}

fn csv_line(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        row.scheme,
        row.relay_count,
        row.mer_db,
        row.alpha_si,
        row.alpha_id,
        row.alpha_ie,
        probability(Some(row.analytic)),
        probability(row.mc_p_hat),
        probability(row.mc_ci_low),
        probability(row.mc_ci_high),
        row.trials,
        row.seed,
    )
}

/// Writes `rows` to `out`. CSV gets the fixed header and one line per row;
/// JSON is an array of objects with the same field names, absent
/// Monte-Carlo values as `null`.
pub fn emit<W: Write>(rows: &[SweepRow], format: Format, out: &mut W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::NoRows);
    }
    match format {
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for row in rows {
                writeln!(out, "{}", csv_line(row))?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Parses rows previously written by [`emit`] in JSON form.
pub fn parse_json(text: &str) -> Result<Vec<SweepRow>> {
    serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))
}
