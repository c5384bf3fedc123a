//! θ sweeps of S_n against its erf approximation, written as CSV or JSON.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::config::{OutFormat, RunConfig, SweepSettings};
use super::{emit, Outcome};
use crate::error::Result;
use crate::expansion::TruncationPlan;
use crate::hp::PrecisionContext;
use crate::stokes::{sweep, PlanSource};

/// One output row. Numeric fields are `None` when the point failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta_over_pi: f64,
    #[serde(rename = "re_S_exact")]
    pub re_exact: Option<f64>,
    #[serde(rename = "im_S_exact")]
    pub im_exact: Option<f64>,
    #[serde(rename = "S_approx")]
    pub approx: Option<f64>,
    pub abs_residual: Option<f64>,
    #[serde(rename = "N_list")]
    pub n_list: String,
    pub error: Option<String>,
    /// Re and Im S_n printed to the working number of significant digits.
    #[serde(skip)]
    pub exact_text: Option<(String, String)>,
}

/// `N_1/N′_1;N_2/N′_2;...`
pub fn plan_list(plan: &TruncationPlan) -> String {
    plan.nk()
        .iter()
        .zip(plan.nk_prime())
        .map(|(a, b)| format!("{a}/{b}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn compute(settings: &SweepSettings, ctx: &PrecisionContext) -> Result<Vec<SweepRow>> {
    let s = ctx.complex((settings.s.re, settings.s.im));
    let plans = match &settings.pinned {
        Some(p) => PlanSource::Pinned(p.clone()),
        None => PlanSource::Optimal,
    };
    let t = settings.theta;
    let digits = ctx.digits() as usize;
    let points = sweep(settings.n, settings.abs_a, &s, (t.lo, t.hi, t.count), &plans, ctx)?;
    Ok(points
        .into_iter()
        .map(|p| match p.result {
            Ok(m) => SweepRow {
                theta_over_pi: p.theta_over_pi,
                re_exact: Some(m.re()),
                im_exact: Some(m.im()),
                approx: Some(m.approx),
                abs_residual: Some(m.residual()),
                n_list: plan_list(&m.plan),
                error: None,
                exact_text: Some((
                    m.exact.real().to_string_radix(10, Some(digits)),
                    m.exact.imag().to_string_radix(10, Some(digits)),
                )),
            },
            Err(e) => SweepRow {
                theta_over_pi: p.theta_over_pi,
                re_exact: None,
                im_exact: None,
                approx: None,
                abs_residual: None,
                n_list: settings.pinned.as_ref().map(plan_list).unwrap_or_default(),
                error: Some(e.to_string()),
                exact_text: None,
            },
        })
        .collect())
}

pub fn render_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "theta_over_pi",
        "re_S_exact",
        "im_S_exact",
        "S_approx",
        "abs_residual",
        "N_list",
        "error",
    ])
    .map_err(super::csv_err)?;
    for r in rows {
        let (re, im) = r.exact_text.clone().unwrap_or_default();
        w.write_record([
            format!("{:.10}", r.theta_over_pi),
            re,
            im,
            r.approx.map(|v| format!("{v:.15}")).unwrap_or_default(),
            r.abs_residual.map(|v| format!("{v:.6e}")).unwrap_or_default(),
            r.n_list.clone(),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(super::csv_err)?;
    }
    super::csv_finish(w)
}

pub fn render_json(rows: &[SweepRow], settings: &SweepSettings, cfg: &RunConfig, ctx: &PrecisionContext) -> String {
    let generated = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let v = serde_json::json!({
        "meta": {
            "digits": ctx.digits(),
            "s": settings.s.to_string(),
            "absA": settings.abs_a,
            "n": settings.n,
            "theta": settings.theta.to_string(),
            "planSource": match (&cfg.reproduce_caption, &settings.pinned) {
                (Some(c), Some(p)) => format!("pinned:{c:?}:{}", plan_list(p)).to_lowercase(),
                _ => "optimal".to_string(),
            },
            "generatedAtUnix": generated,
            "nonComparable": ["generatedAtUnix"],
        },
        "rows": rows,
    });
    serde_json::to_string_pretty(&v).expect("plain data") + "\n"
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let settings = cfg.sweep_settings()?;
    let ctx = cfg.context()?;
    let rows = compute(&settings, &ctx)?;
    let text = match cfg.out_format {
        OutFormat::Csv => render_csv(&rows)?,
        OutFormat::Json => render_json(&rows, &settings, cfg, &ctx),
    };
    emit(cfg.out_path.as_deref(), &text)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("sweep: {failed} of {} points failed; see the error column", rows.len());
    }
    Ok(Outcome::Success)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::{ComplexArg, ThetaRange};

    fn settings(n: u32, count: usize) -> SweepSettings {
        SweepSettings {
            n,
            abs_a: 7.0,
            s: ComplexArg { re: 3.0, im: 0.0 },
            theta: ThetaRange {
                lo: 0.3,
                hi: 0.7,
                count,
            },
            pinned: None,
        }
    }

    #[test]
    fn generic_sweep_tracks_the_approximation() {
        let ctx = PrecisionContext::with_digits(40).unwrap();
        let rows = compute(&settings(1, 9), &ctx).unwrap();
        assert_eq!(rows.len(), 9);
        let worst = rows.iter().map(|r| r.abs_residual.unwrap()).fold(0.0, f64::max);
        assert!(worst <= 0.05, "{worst}");
        let csv = render_csv(&rows).unwrap();
        assert!(csv.starts_with("theta_over_pi,re_S_exact,im_S_exact,S_approx,abs_residual,N_list,error\n"));
        assert_eq!(csv.lines().count(), 10);
    }

    #[test]
    fn failures_land_in_the_error_column() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let mut s = settings(2, 2);
        s.abs_a = 6.0;
        s.theta = ThetaRange {
            lo: 0.45,
            hi: 0.5,
            count: 2,
        };
        let rows = compute(&s, &ctx).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.error.as_deref().is_some_and(|e| e.contains("insufficient precision"))));
        let csv = render_csv(&rows).unwrap();
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn plan_list_pairs_indices_by_scale() {
        let p = TruncationPlan::new(vec![18, 36], vec![18, 37]).unwrap();
        assert_eq!(plan_list(&p), "18/18;36/37");
    }
}
