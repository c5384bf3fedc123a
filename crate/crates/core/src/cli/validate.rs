//! Identity checks across all modules, reported as name, residual,
//! tolerance and pass/fail.
//!
//! Entries marked informational are measured and printed but do not decide
//! the exit status; they record the alternative written forms and the
//! rejected prefactor.

use std::f64::consts::PI;

use rayon::prelude::*;
use rug::Complex;
use serde::Serialize;

use super::config::{Caption, RunConfig};
use super::Outcome;
use crate::error::Result;
use crate::expansion::{
    algebraic_series, default_k_max, remainder_series, script_r_k, script_r_k_form, two_pi_pow_s, z_equal_truncation,
    z_improved, RemainderForm, TruncationPlan,
};
use crate::hp::{abs_diff, abs_f64, rel_diff, PrecisionContext, RayComplex};
use crate::oracle::{
    f_tilde_reference, f_tilde_via_z, periodic_zeta_direct, periodic_zeta_via_hurwitz, z_reference, ZetaPoint,
};
use crate::stokes::{stokes_multiplier, stokes_multiplier_with_plan};
use crate::terminant::{c_of_phi, connection_residual, terminant, terminant_away, terminant_smoothing, TerminantQuery};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl SuiteResult {
    fn measured(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        SuiteResult {
            name: name.into(),
            residual: Some(residual),
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
            informational: false,
            detail: None,
        }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    fn from_result(name: &str, tolerance: f64, r: Result<f64>) -> Self {
        match r {
            Ok(v) => Self::measured(name, v, tolerance),
            Err(e) => SuiteResult {
                name: name.into(),
                residual: None,
                tolerance,
                pass: false,
                informational: false,
                detail: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub digits: u32,
    pub entries: Vec<SuiteResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass || e.informational)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("validation at {} digits\n", self.digits);
        for e in &self.entries {
            let status = match (e.pass, e.informational) {
                (true, false) => "PASS",
                (false, false) => "FAIL",
                (_, true) => "INFO",
            };
            let residual = e.residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "-".into());
            out += &format!(
                "{status}  {:<40} residual {residual:>10}  tolerance {:.1e}",
                e.name, e.tolerance
            );
            if let Some(d) = &e.detail {
                out += &format!("  ({d})");
            }
            out.push('\n');
        }
        out
    }
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

fn exactness_tol(ctx: &PrecisionContext) -> f64 {
    10f64.powi(-(ctx.digits() as i32) + 10)
}

fn grid_points(ctx: &PrecisionContext) -> Result<Vec<ZetaPoint>> {
    let mut pts = Vec::new();
    for s in [(3.0, 0.0), (2.0, 0.5)] {
        for t in [0.4, 0.6] {
            for a in [4.0, 8.0] {
                pts.push(ZetaPoint::from_polar(ctx.complex(s), a, t, ctx)?);
            }
        }
    }
    Ok(pts)
}

fn exactness_grid(ctx: &PrecisionContext) -> Result<f64> {
    let pts = grid_points(ctx)?;
    max_of(
        pts.par_iter()
            .map(|p| {
                let k = default_k_max(p, 1, ctx)?;
                let plan = TruncationPlan::optimal(p, k, ctx)?;
                let z = z_improved(p.s(), p.a(), &plan, ctx)?;
                Ok(rel_diff(&z, &z_reference(p.s(), p.a(), ctx)?, 0.0))
            })
            .collect::<Vec<_>>(),
    )
}

fn equal_truncation(ctx: &PrecisionContext) -> Result<f64> {
    let pts = grid_points(ctx)?;
    max_of(
        pts.par_iter()
            .map(|p| {
                let k = default_k_max(p, 1, ctx)?;
                let plan = TruncationPlan::constant(10, k)?;
                let lhs = z_equal_truncation(p.s(), p.a(), 10, k, ctx)?;
                Ok(rel_diff(&lhs, &z_improved(p.s(), p.a(), &plan, ctx)?, 0.0))
            })
            .collect::<Vec<_>>(),
    )
}

fn identity_points(ctx: &PrecisionContext) -> Result<Vec<ZetaPoint>> {
    [
        ((2.0, 0.0), 6.0, 0.45),
        ((3.0, 0.0), 5.0, 0.5),
        ((2.5, 0.7), 5.0, 0.35),
        ((3.5, -0.4), 3.0, 0.7),
    ]
    .into_iter()
    .map(|(s, a, t)| ZetaPoint::from_polar(ctx.complex(s), a, t, ctx))
    .collect()
}

/// max |lhs − rhs| / (1 + |lhs|).
fn identity(ctx: &PrecisionContext, f: fn(&ZetaPoint, &PrecisionContext) -> Result<(Complex, Complex)>) -> Result<f64> {
    let pts = identity_points(ctx)?;
    max_of(pts.iter().map(|p| {
        let (l, r) = f(p, ctx)?;
        Ok(abs_diff(&l, &r).to_f64() / (1.0 + abs_f64(&l)))
    }))
}

fn connection(ctx: &PrecisionContext) -> Result<f64> {
    let sample = [
        ((37.0, 0.0), 37.7, 0.02),
        ((12.5, 0.5), 20.0, -0.3),
        ((71.0, -0.5), 55.0, 0.7),
    ];
    max_of(sample.iter().map(|&(nu, m, t)| {
        Ok(connection_residual(&ctx.complex(nu), &RayComplex::from_turns(m, t, ctx)?, ctx)?.to_f64())
    }))
}

/// max |T_ν(|z|e^(iπ)) − ½|·√|z| with ν = |z|.
fn smoothing(ctx: &PrecisionContext) -> Result<f64> {
    max_of([30.0, 60.0, 100.0].iter().map(|&m: &f64| {
        let q = TerminantQuery::new(ctx.complex(m), RayComplex::from_turns(m, 1.0, ctx)?)?;
        let t = terminant(&q, ctx)?;
        Ok(abs_f64(&Complex::with_val(ctx.prec(), &t - ctx.complex(0.5))) * m.sqrt())
    }))
}

/// Relative error of the away-from-the-line form times |z|.
fn away_agreement(ctx: &PrecisionContext) -> Result<f64> {
    max_of(
        [(40.0, 0.3), (60.0, 0.3), (50.0, -0.5)]
            .iter()
            .map(|&(m, t): &(f64, f64)| {
                let q = TerminantQuery::new(ctx.complex(m), RayComplex::from_turns(m, t, ctx)?)?;
                let exact = terminant(&q, ctx)?;
                Ok(rel_diff(&terminant_away(&q, ctx)?, &exact, 0.0) * m)
            }),
    )
}

/// Error of the smoothing form at arg z = 0.9π, |z| = 50, in units of
/// |z|^(−1/2)·e^(−½|z|Re c²).
fn smoothing_form_agreement(ctx: &PrecisionContext) -> Result<f64> {
    let m = 50.0f64;
    let q = TerminantQuery::new(ctx.complex(m), RayComplex::from_turns(m, 0.9, ctx)?)?;
    let exact = terminant(&q, ctx)?;
    let approx = terminant_smoothing(&q, ctx)?;
    let c = c_of_phi(q.phi())?.c;
    let unit = (-0.5 * m * (c * c).re).exp() / m.sqrt();
    Ok(abs_diff(&approx, &exact).to_f64() / unit)
}

fn remainder_forms(ctx: &PrecisionContext) -> Vec<SuiteResult> {
    let tol = exactness_tol(ctx);
    let run = || -> Result<Vec<(RemainderForm, f64)>> {
        let p = ZetaPoint::from_polar(ctx.complex(3), 6.0, 0.45, ctx)?;
        let plan = TruncationPlan::optimal(&p, 1, ctx)?;
        let (n, np) = (plan.nk()[0], plan.nk_prime()[0]);
        let reference = script_r_k(1, &p, n, np, ctx)?;
        // The forms carry e^(±2πika); measure against that size too.
        let scale = abs_f64(&reference).max((-2.0 * PI * 6.0 * (0.45 * PI).sin()).exp());
        RemainderForm::ALL
            .iter()
            .map(|&f| {
                let v = script_r_k_form(f, 1, &p, n, np, ctx)?;
                Ok((f, abs_diff(&v, &reference).to_f64() / scale))
            })
            .collect()
    };
    match run() {
        Ok(list) => list
            .into_iter()
            .map(|(f, r)| {
                let e = SuiteResult::measured(format!("remainder form: {}", f.name()), r, tol);
                match f {
                    RemainderForm::Expanded | RemainderForm::Connected => e,
                    _ => e.informational(),
                }
            })
            .collect(),
        Err(e) => vec![SuiteResult::from_result("remainder forms", tol, Err(e))],
    }
}

fn prefactor(ctx: &PrecisionContext) -> Vec<SuiteResult> {
    let tol = exactness_tol(ctx);
    let run = || -> Result<(f64, f64)> {
        let p = ZetaPoint::from_polar(ctx.complex((2.0, 0.5)), 6.0, 0.45, ctx)?;
        let k = default_k_max(&p, 1, ctx)?;
        let plan = TruncationPlan::optimal(&p, k, ctx)?;
        let body = Complex::with_val(
            ctx.prec(),
            algebraic_series(p.s(), p.a(), plan.nk(), ctx)? + remainder_series(p.s(), p.a(), plan.nk(), ctx)?,
        );
        let single = two_pi_pow_s(p.s(), ctx)?;
        let double = Complex::with_val(ctx.prec(), single.square_ref());
        let z = z_reference(p.s(), p.a(), ctx)?;
        let r1 = rel_diff(&Complex::with_val(ctx.prec(), &single * &body), &z, 0.0);
        let r2 = rel_diff(&Complex::with_val(ctx.prec(), &double * &body), &z, 0.0);
        Ok((r1, r2))
    };
    match run() {
        Ok((r1, r2)) => vec![
            SuiteResult::measured("prefactor (2pi)^s", r1, tol),
            SuiteResult::measured("prefactor (2pi)^(2s)", r2, tol).informational(),
        ],
        Err(e) => vec![SuiteResult::from_result("prefactor", tol, Err(e))],
    }
}

fn n1_bernoulli(ctx: &PrecisionContext) -> Result<f64> {
    let p = ZetaPoint::from_polar(ctx.complex(3), 6.0, 0.47, ctx)?;
    let m = stokes_multiplier(1, &p, ctx)?;
    Ok(m.diagnostics["bernoulli_form_residual"])
}

/// |Re S_2 − erf form| at the centre of the fig1c preset sweep.
fn n2_extraction(ctx: &PrecisionContext) -> Result<f64> {
    let preset = Caption::Fig1c.preset();
    let p = ZetaPoint::from_polar(ctx.complex((preset.s.re, preset.s.im)), preset.abs_a, 0.5, ctx)?;
    Ok(stokes_multiplier_with_plan(2, &p, &preset.plan()?, ctx)?.residual())
}

pub fn report(ctx: &PrecisionContext) -> ValidationReport {
    let tol = ctx.tol_f64();
    let ex = exactness_tol(ctx);
    let mut entries = vec![
        SuiteResult::from_result("improved expansion exactness grid", ex, exactness_grid(ctx)),
        SuiteResult::from_result("equal-truncation form equivalence", ex, equal_truncation(ctx)),
        SuiteResult::from_result(
            "periodic sum vs Hurwitz combination",
            tol,
            identity(ctx, |p, c| {
                Ok((periodic_zeta_direct(p, c)?, periodic_zeta_via_hurwitz(p, c)?))
            }),
        ),
        SuiteResult::from_result(
            "F-tilde vs improved-part combination",
            tol,
            identity(ctx, |p, c| Ok((f_tilde_reference(p, c)?, f_tilde_via_z(p, c)?))),
        ),
        SuiteResult::from_result("terminant connection formula", ex, connection(ctx)),
        SuiteResult::from_result("terminant smoothing on the Stokes line", 2.0, smoothing(ctx)),
        SuiteResult::from_result("terminant away form (rel err * |z|)", 5.0, away_agreement(ctx)),
        SuiteResult::from_result(
            "terminant smoothing form (scaled err)",
            5.0,
            smoothing_form_agreement(ctx),
        ),
    ];
    entries.extend(remainder_forms(ctx));
    entries.extend(prefactor(ctx));
    entries.push(SuiteResult::from_result(
        "n=1 zeta-block vs Bernoulli subtraction",
        10f64.powi(-(ctx.digits() as i32) + 12),
        n1_bernoulli(ctx),
    ));
    entries.push(SuiteResult::from_result(
        "n=2 extraction at |a|=6, s=2",
        0.05,
        n2_extraction(ctx),
    ));
    ValidationReport {
        digits: ctx.digits(),
        entries,
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let ctx = cfg.context()?;
    let rep = report(&ctx);
    print!("{}", rep.render_text());
    if let Some(path) = &cfg.json_path {
        let text = serde_json::to_string_pretty(&rep).expect("plain data") + "\n";
        super::emit(Some(path), &text)?;
    }
    Ok(if rep.all_passed() {
        Outcome::Success
    } else {
        Outcome::CheckFailed
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_precision_passes_and_reports_rejected_forms() {
        let rep = report(&PrecisionContext::default());
        assert!(rep.all_passed(), "{}", rep.render_text());
        let get = |name: &str| rep.entries.iter().find(|e| e.name == name).unwrap();
        let double = get("prefactor (2pi)^(2s)");
        assert!(double.informational && !double.pass);
        let printed = get("remainder form: connected-alternate-sign");
        assert!(printed.residual.unwrap() > 1e-3);
    }

    #[test]
    fn thirty_digits_cannot_resolve_the_second_exponential() {
        let rep = report(&PrecisionContext::with_digits(30).unwrap());
        let e = rep.entries.iter().find(|e| e.name.starts_with("n=2")).unwrap();
        assert!(!e.pass);
        assert!(e.detail.as_deref().unwrap().contains("insufficient precision"));
        assert!(!rep.all_passed());
    }
}
