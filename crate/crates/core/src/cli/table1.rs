//! Location and depth of the n = 1 multiplier minimum for a list of |a|.

use serde::Serialize;

use super::config::{OutFormat, RunConfig};
use super::{emit, Outcome};
use crate::error::Result;
use crate::stokes::find_minimum;

/// Reference (|a|, θ0/π, S_1(θ0)) rows for the check.
pub const REFERENCE_ROWS: [(f64, f64, f64); 8] = [
    (1.0, 0.314363, 0.185967),
    (2.0, 0.416139, 0.370072),
    (4.0, 0.459300, 0.529774),
    (6.0, 0.473089, 0.608463),
    (8.0, 0.479894, 0.657472),
    (10.0, 0.483951, 0.691736),
    (15.0, 0.489331, 0.746192),
    (20.0, 0.492010, 0.779264),
];

pub const CHECK_TOLERANCE: f64 = 5e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Table1Row {
    pub abs_a: f64,
    #[serde(rename = "theta0_over_pi")]
    pub theta0_over_pi: f64,
    #[serde(rename = "S1_min")]
    pub s1_min: f64,
}

pub fn compute() -> Result<Vec<Table1Row>> {
    REFERENCE_ROWS
        .iter()
        .map(|&(abs_a, _, _)| {
            let m = find_minimum(1, abs_a)?;
            Ok(Table1Row {
                abs_a,
                theta0_over_pi: m.theta0_over_pi(),
                s1_min: m.s_min,
            })
        })
        .collect()
}

/// One line per row that misses the reference values.
pub fn diff_report(rows: &[Table1Row]) -> Vec<String> {
    rows.iter()
        .zip(REFERENCE_ROWS.iter())
        .filter_map(|(r, &(a, t, s))| {
            let dt = r.theta0_over_pi - t;
            let ds = r.s1_min - s;
            (dt.abs() > CHECK_TOLERANCE || ds.abs() > CHECK_TOLERANCE).then(|| {
                format!(
                    "|a| = {a}: theta0/pi {:.9} vs {t:.6} (diff {dt:+.2e}), S1 {:.9} vs {s:.6} (diff {ds:+.2e})",
                    r.theta0_over_pi, r.s1_min
                )
            })
        })
        .collect()
}

pub fn render(rows: &[Table1Row], format: OutFormat) -> Result<String> {
    match format {
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["absA", "theta0_over_pi", "S1_min"])
                .map_err(super::csv_err)?;
            for r in rows {
                w.write_record([
                    format!("{}", r.abs_a),
                    format!("{:.9}", r.theta0_over_pi),
                    format!("{:.9}", r.s1_min),
                ])
                .map_err(super::csv_err)?;
            }
            super::csv_finish(w)
        }
        OutFormat::Json => {
            let v = serde_json::json!({ "meta": { "table": "table1", "n": 1 }, "rows": rows });
            Ok(serde_json::to_string_pretty(&v).expect("plain data") + "\n")
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    // The minimization is double precision; the context only validates --digits.
    cfg.context()?;
    let rows = compute()?;
    emit(cfg.out_path.as_deref(), &render(&rows, cfg.out_format)?)?;
    if cfg.check {
        let diffs = diff_report(&rows);
        if !diffs.is_empty() {
            for d in &diffs {
                eprintln!("table1 mismatch: {d}");
            }
            return Ok(Outcome::CheckFailed);
        }
        eprintln!("table1 check: all {} rows within {CHECK_TOLERANCE:e}", rows.len());
    }
    Ok(Outcome::Success)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_report_flags_only_mismatches() {
        let mut rows: Vec<Table1Row> = REFERENCE_ROWS
            .iter()
            .map(|&(abs_a, theta0_over_pi, s1_min)| Table1Row {
                abs_a,
                theta0_over_pi,
                s1_min,
            })
            .collect();
        assert!(diff_report(&rows).is_empty());
        rows[3].s1_min += 1e-6;
        let d = diff_report(&rows);
        assert_eq!(d.len(), 1);
        assert!(d[0].starts_with("|a| = 6"), "{}", d[0]);
    }

    #[test]
    fn csv_has_header_and_eight_rows() {
        let rows = compute().unwrap();
        let text = render(&rows, OutFormat::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "absA,theta0_over_pi,S1_min");
        assert_eq!(lines.len(), 9);
        assert!(diff_report(&rows).is_empty());
    }
}
