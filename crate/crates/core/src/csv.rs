//! Metrics table as CSV: six significant digits, `NA` for undefined cells.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::metrics::ReportRow;

pub const HEADER: &str =
    "config,allowable_error,mean_average_error,avg_success_hops,failure_ratio,swaps,successes,total";
pub const UNDEFINED: &str = "NA";

/// Formats `x` with six significant digits, `%g` style: trailing zeros are
/// trimmed and very large or small magnitudes switch to exponent notation.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| UNDEFINED.to_string(), format_sig6)
}

pub fn render_csv(rows: &[ReportRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.mode,
            format_sig6(r.allowable_error),
            opt(r.mean_average_error),
            opt(r.avg_success_hops),
            format_sig6(r.failure_ratio),
            r.swaps,
            r.successes,
            r.total
        );
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                reason: "missing or unexpected header".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            parse_row(line).map_err(|reason| Error::Parse {
                line: i + 1,
                reason,
            })
        })
        .collect()
}

fn parse_row(line: &str) -> std::result::Result<ReportRow, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 8 {
        return Err(format!("expected 8 fields, found {}", fields.len()));
    }
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| format!("`{s}` is not a number"))
    };
    let opt_num = |s: &str| {
        if s == UNDEFINED {
            Ok(None)
        } else {
            num(s).map(Some)
        }
    };
    let count = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| format!("`{s}` is not a count"))
    };
    Ok(ReportRow {
        mode: fields[0].parse().map_err(|e: Error| e.to_string())?,
        allowable_error: num(fields[1])?,
        mean_average_error: opt_num(fields[2])?,
        avg_success_hops: opt_num(fields[3])?,
        failure_ratio: num(fields[4])?,
        swaps: count(fields[5])?,
        successes: count(fields[6])?,
        total: count(fields[7])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::SearchMode;
    use proptest::prelude::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(6.0), "6");
        assert_eq!(format_sig6(0.5), "0.5");
        assert_eq!(format_sig6(700.0 / 12.0), "58.3333");
        assert_eq!(format_sig6(2.0 / 3.0), "0.666667");
        assert_eq!(format_sig6(999999.6), "1e6");
        assert_eq!(format_sig6(123456.4), "123456");
        assert_eq!(format_sig6(0.0000123456789), "1.23457e-5");
        assert_eq!(format_sig6(0.000123456789), "0.000123457");
    }

    #[test]
    fn undefined_cells_use_sentinel() {
        let row = ReportRow {
            mode: SearchMode::Guided,
            allowable_error: 0.0,
            mean_average_error: None,
            avg_success_hops: None,
            failure_ratio: 1.0,
            swaps: 0,
            successes: 0,
            total: 4,
        };
        let text = render_csv(&[row]);
        assert_eq!(text, format!("{HEADER}\nconfig2,0,NA,NA,1,0,0,4\n"));
        assert_eq!(parse_csv(&text).unwrap(), vec![row]);
    }

    #[test]
    fn rejects_bad_header() {
        assert!(parse_csv("a,b\n").is_err());
        assert!(parse_csv(&format!("{HEADER}\nconfig1,0,1\n")).is_err());
    }

    proptest! {
        #[test]
        fn sig6_parses_back_close(x in 1e-7f64..1e9) {
            let y: f64 = format_sig6(x).parse().unwrap();
            prop_assert!(((y - x) / x).abs() <= 5e-6);
        }

        #[test]
        fn reparse_renders_identically(
            mae in prop::option::of(0.0f64..12.0),
            hops in prop::option::of(1.0f64..10.0),
            fail in 0.0f64..=1.0,
            counts in (0u64..1000, 0u64..1000, 1u64..100000),
        ) {
            let row = ReportRow {
                mode: SearchMode::Adaptive,
                allowable_error: 2.5,
                mean_average_error: mae,
                avg_success_hops: hops,
                failure_ratio: fail,
                swaps: counts.0,
                successes: counts.1,
                total: counts.2,
            };
            let text = render_csv(&[row]);
            let back = parse_csv(&text).unwrap();
            prop_assert_eq!(render_csv(&back), text);
            prop_assert_eq!(back[0].total, row.total);
        }
    }
}
