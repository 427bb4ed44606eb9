//! CSV and JSON output.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::Beampattern;

use super::sweep::{SweepResult, SweepRow};

pub const SWEEP_HEADER: &str = "method,axis_value,mean_mui,std_mui,mean_sigma_r_sq,mean_sigma_c_sq,trials";
pub const BEAMPATTERN_HEADER: &str = "angle_deg,nrp,nrp_db";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::config("format", format!("expected csv or json, got `{other}`"))),
        }
    }
}

/// Nine significant digits, shortest form, like C's `%.9g`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.method,
            format_float(r.axis_value),
            format_float(r.mean_mui),
            format_float(r.std_mui),
            format_float(r.mean_sigma_r_sq),
            format_float(r.mean_sigma_c_sq),
            r.trials
        ));
    }
    out
}

pub fn sweep_json(result: &SweepResult) -> String {
    let mut s = serde_json::to_string_pretty(&result.rows).expect("rows serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct PatternRow {
    angle_deg: f64,
    nrp: f64,
    nrp_db: f64,
}

fn pattern_rows(bp: &Beampattern) -> impl Iterator<Item = PatternRow> + '_ {
    bp.angles_deg
        .iter()
        .zip(&bp.nrp)
        .zip(&bp.nrp_db)
        .map(|((&angle_deg, &nrp), &nrp_db)| PatternRow { angle_deg, nrp, nrp_db })
}

pub fn beampattern_csv(bp: &Beampattern) -> String {
    let mut out = String::from(BEAMPATTERN_HEADER);
    out.push('\n');
    for row in pattern_rows(bp) {
        out.push_str(&format!(
            "{},{},{}\n",
            format_float(row.angle_deg),
            format_float(row.nrp),
            format_float(row.nrp_db)
        ));
    }
    out
}

pub fn beampattern_json(bp: &Beampattern) -> String {
    let rows: Vec<PatternRow> = pattern_rows(bp).collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

pub fn emit_sweep(result: &SweepResult, path: Option<&Path>, format: Format) -> Result<()> {
    let text = match format {
        Format::Csv => sweep_csv(result),
        Format::Json => sweep_json(result),
    };
    write_output(&text, path)
}

pub fn emit_beampattern(bp: &Beampattern, path: Option<&Path>, format: Format) -> Result<()> {
    let text = match format {
        Format::Csv => beampattern_csv(bp),
        Format::Json => beampattern_json(bp),
    };
    write_output(&text, path)
}

/// Reads rows back from [`sweep_csv`] output.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(SWEEP_HEADER) {
        return Err(Error::InvalidArgument("missing sweep CSV header".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || Error::InvalidArgument(format!("malformed CSV row {}: `{line}`", i + 2));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(bad());
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
            Ok(SweepRow {
                method: fields[0].to_string(),
                axis_value: num(fields[1])?,
                mean_mui: num(fields[2])?,
                std_mui: num(fields[3])?,
                mean_sigma_r_sq: num(fields[4])?,
                mean_sigma_c_sq: num(fields[5])?,
                trials: fields[6].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Axis;

    fn row(method: &str, x: f64) -> SweepRow {
        SweepRow {
            method: method.into(),
            axis_value: x,
            mean_mui: 12.345678912345 * x.abs() + 0.1,
            std_mui: 0.001234,
            mean_sigma_r_sq: 1e-12,
            mean_sigma_c_sq: 123456789012.0,
            trials: 5,
        }
    }

    #[test]
    fn float_format_matches_percent_g() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-10.0), "-10");
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333");
        assert_eq!(format_float(123456789.4), "123456789");
        assert_eq!(format_float(1234567891.0), "1.23456789e+09");
        assert_eq!(format_float(0.00012345), "0.00012345");
        assert_eq!(format_float(0.000012345), "1.2345e-05");
        assert_eq!(format_float(9.9999999999), "10");
    }

    #[test]
    fn empty_result_is_header_only() {
        let res = SweepResult {
            axis: Axis::SnrDb,
            rows: vec![],
        };
        assert_eq!(sweep_csv(&res), format!("{SWEEP_HEADER}\n"));
    }

    #[test]
    fn csv_round_trips_within_print_precision() {
        let rows: Vec<SweepRow> = ["a", "b"]
            .iter()
            .flat_map(|m| [-10.0, 0.0, 10.0].map(|x| row(m, x)))
            .collect();
        let res = SweepResult {
            axis: Axis::SnrDb,
            rows: rows.clone(),
        };
        let text = sweep_csv(&res);
        assert_eq!(text.lines().count(), 7);
        let back = parse_sweep_csv(&text).unwrap();
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.method, b.method);
            for (x, y) in [
                (a.axis_value, b.axis_value),
                (a.mean_mui, b.mean_mui),
                (a.std_mui, b.std_mui),
                (a.mean_sigma_r_sq, b.mean_sigma_r_sq),
                (a.mean_sigma_c_sq, b.mean_sigma_c_sq),
            ] {
                assert!((x - y).abs() <= 5e-9 * x.abs(), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn unwritable_path_names_the_path() {
        let res = SweepResult {
            axis: Axis::SnrDb,
            rows: vec![],
        };
        let path = Path::new("/nonexistent-dir/out.csv");
        match emit_sweep(&res, Some(path), Format::Csv) {
            Err(Error::Io { path: p, .. }) => assert!(p.contains("nonexistent-dir")),
            other => panic!("expected I/O error, got {other:?}"),
        }
    }
}
