//! Stokes multipliers S_n(θ) of the exponentials e^(2πina) in F̃(a,s).
//!
//! S_n is read off by subtracting from F̃ the algebraic series of scales
//! k ≤ n and the complete remainders ℛ_k of the larger exponentials k < n,
//! then dividing out n^(s−1)e^(2πina).

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use rug::{Complex, Float};

use crate::error::{Result, ZetaError};
use crate::expansion::{
    poincare_partial_sum, rearranged_double_sum, script_r_k, two_pi_pow_s, GeometryPack, Side, TruncationPlan,
};
use crate::hp::{abs_f64, erf_f64, PrecisionContext};
use crate::oracle::{f_tilde_parts, half_turn_phases, ZetaPoint, ORACLE_MIN_RE_S};

/// Leading-order shape of the multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxMode {
    /// Switch-on at θ = π/2 and partial switch-off at θ = π/2 − δ.
    Double,
    /// A single erf step at θ = π/2.
    Single,
}

/// One evaluated multiplier with the magnitudes that were cancelled to get it.
#[derive(Debug, Clone)]
pub struct MultiplierSample {
    pub theta: f64,
    pub exact: Complex,
    pub approx: f64,
    pub plan: TruncationPlan,
    pub diagnostics: BTreeMap<String, f64>,
}

impl MultiplierSample {
    pub fn theta_over_pi(&self) -> f64 {
        self.theta / PI
    }

    pub fn re(&self) -> f64 {
        self.exact.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.exact.imag().to_f64()
    }

    pub fn residual(&self) -> f64 {
        (self.re() - self.approx).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimumResult {
    pub n: u32,
    pub abs_a: f64,
    pub theta0: f64,
    pub s_min: f64,
}

impl MinimumResult {
    pub fn theta0_over_pi(&self) -> f64 {
        self.theta0 / PI
    }
}

/// Where the truncation indices of a sample come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanSource {
    /// Least-term indices recomputed at every θ.
    Optimal,
    /// Fixed indices, used unchanged at every θ.
    Pinned(TruncationPlan),
}

/// S_n(θ) with least-term indices for the scales 1..n.
pub fn stokes_multiplier(n: u32, point: &ZetaPoint, ctx: &PrecisionContext) -> Result<MultiplierSample> {
    let plan = TruncationPlan::optimal(point, n as usize, ctx)?;
    stokes_multiplier_with_plan(n, point, &plan, ctx)
}

/// S_n(θ) with the given indices for the scales 1..n.
///
/// Fails with an insufficient-precision error when the target term
/// n^(s−1)e^(2πina) is smaller than the tolerance times the largest quantity
/// cancelled against it.
pub fn stokes_multiplier_with_plan(
    n: u32,
    point: &ZetaPoint,
    plan: &TruncationPlan,
    ctx: &PrecisionContext,
) -> Result<MultiplierSample> {
    if n == 0 {
        return Err(ZetaError::InvalidInput("multiplier index n starts at 1".into()));
    }
    if plan.k_max() < n as usize {
        return Err(ZetaError::InvalidInput(format!(
            "plan covers {} scales, S_{n} needs {n}",
            plan.k_max()
        )));
    }
    let s = point.s();
    if s.real().to_f64() <= ORACLE_MIN_RE_S {
        return Err(ZetaError::Domain(format!(
            "multiplier extraction needs Re s > {ORACLE_MIN_RE_S}"
        )));
    }
    let prec = ctx.prec();
    let head = plan.with_k_max(n as usize)?;
    let mut diag = BTreeMap::new();

    let parts = f_tilde_parts(point, ctx)?;
    let (h_plus, h_minus) = half_turn_phases(s, ctx);
    let blocks_a = rearranged_double_sum(point, &head, ctx, Side::A)?;
    let blocks_ap = rearranged_double_sum(point, &head, ctx, Side::APrime)?;
    let peeled_a = Complex::with_val(prec, &h_plus * &blocks_a);
    let peeled_ap = Complex::with_val(prec, &h_minus * &blocks_ap);
    let mut rest = Complex::with_val(prec, &parts.value - &peeled_a) - &peeled_ap;

    let mut largest = parts.scale().max(abs_f64(&peeled_a)).max(abs_f64(&peeled_ap));
    diag.insert("abs_f_tilde".into(), abs_f64(&parts.value));
    diag.insert("f_tilde_scale".into(), parts.scale());
    diag.insert("peeled_series_a".into(), abs_f64(&peeled_a));
    diag.insert("peeled_series_a_prime".into(), abs_f64(&peeled_ap));

    for k in 1..n {
        let rk = script_r_k(
            k,
            point,
            head.nk()[k as usize - 1],
            head.nk_prime()[k as usize - 1],
            ctx,
        )?;
        let weighted = Complex::with_val(prec, k_pow(k, s, prec) * &rk);
        largest = largest.max(abs_f64(&weighted));
        diag.insert(format!("abs_script_r_{k}"), abs_f64(&rk));
        rest -= weighted;
    }

    let target = Complex::with_val(prec, k_pow(n, s, prec) * exp_two_pi_i_n_a(n, point, ctx));
    let target_abs = abs_f64(&target);
    diag.insert("target_scale".into(), target_abs);
    let tol = ctx.tol_f64();
    if target_abs < tol * largest {
        let required = (10.0 + (largest / target_abs).log10()).ceil() as u32 + 1;
        return Err(ZetaError::InsufficientPrecision {
            context: format!(
                "S_{n}: target exponential {target_abs:.3e} is below the tolerance on cancelled terms of size {largest:.3e}"
            ),
            required_digits: required,
        });
    }
    let exact = Complex::with_val(prec, &rest / &target);

    if n == 1 {
        // Same subtraction with the Bernoulli partial sums in place of the
        // ζ-blocks; they are equal term by term for a single scale.
        let inv = Complex::with_val(prec, two_pi_pow_s(s, ctx)?.recip_ref());
        let pa = poincare_partial_sum(s, point.a(), head.nk()[0], ctx)?;
        let pp = poincare_partial_sum(s, point.a_prime(), head.nk_prime()[0], ctx)?;
        let alt = Complex::with_val(prec, &parts.value - Complex::with_val(prec, &h_plus * &inv) * pa)
            - Complex::with_val(prec, &h_minus * &inv) * pp;
        let d = abs_f64(&Complex::with_val(prec, &alt - &rest));
        let rel = d / parts.scale();
        diag.insert("bernoulli_form_residual".into(), rel);
        if rel > 10f64.powi(-(ctx.digits() as i32) + 12) {
            return Err(ZetaError::NonConvergence("agreement of the two n = 1 forms"));
        }
    }

    let theta = point.theta().to_f64();
    let approx = erf_approx(n, point.a().modulus().to_f64(), theta, ApproxMode::Double);
    Ok(MultiplierSample {
        theta,
        exact,
        approx,
        plan: head,
        diagnostics: diag,
    })
}

fn k_pow(k: u32, s: &Complex, prec: u32) -> Complex {
    let lnk = Float::with_val(prec, k).ln();
    Complex::with_val(prec, Complex::with_val(prec, s - 1u32) * lnk).exp()
}

fn exp_two_pi_i_n_a(n: u32, point: &ZetaPoint, ctx: &PrecisionContext) -> Complex {
    let prec = ctx.prec();
    let w = Complex::with_val(prec, (0, Float::with_val(prec, ctx.pi() * 2u32) * n));
    Complex::with_val(prec, w * point.a().value(ctx)).exp()
}

/// Leading-order multiplier at a = |a|e^(iθ).
///
/// Double: 1 + ½erf[(θ−π/2)√(πn|a|)] − ½erf[(θ+δ−π/2)√(πn|a′|)], with a′ = 1 − a
/// and δ = arg(1 − 1/a). Single: ½ + ½erf[(θ−π/2)√(πn|a|)].
pub fn erf_approx(n: u32, abs_a: f64, theta: f64, mode: ApproxMode) -> f64 {
    let nf = n as f64;
    let on = erf_f64((theta - FRAC_PI_2) * (PI * nf * abs_a).sqrt());
    match mode {
        ApproxMode::Single => 0.5 + 0.5 * on,
        ApproxMode::Double => {
            let (abs_ap, delta) = GeometryPack::from_polar(abs_a, theta);
            let off = erf_f64((theta + delta - FRAC_PI_2) * (PI * nf * abs_ap).sqrt());
            1.0 + 0.5 * on - 0.5 * off
        }
    }
}

const SCAN_LO: f64 = 0.02 * PI;
const SCAN_HI: f64 = 0.98 * PI;
const SCAN_POINTS: usize = 400;
const PLATEAU_NOISE: f64 = 1e-9;

/// Minimum of the double-erf multiplier over θ ∈ (0.02π, 0.98π): a 400-point
/// scan that must show a single interior minimum, then golden-section
/// refinement to |Δθ| < 10^(−10).
pub fn find_minimum(n: u32, abs_a: f64) -> Result<MinimumResult> {
    if abs_a < 1.0 {
        return Err(ZetaError::Domain(format!("|a| = {abs_a} is below 1")));
    }
    let f = |t: f64| erf_approx(n, abs_a, t, ApproxMode::Double);
    let step = (SCAN_HI - SCAN_LO) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| SCAN_LO + step * i as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    // Rounding ripples on the plateaus at 1 are not minima.
    let minima: Vec<usize> = (1..SCAN_POINTS - 1)
        .filter(|&i| vals[i] < vals[i - 1] && vals[i] <= vals[i + 1] && vals[i] < 1.0 - PLATEAU_NOISE)
        .collect();
    let best = (0..SCAN_POINTS)
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .expect("nonempty grid");
    if best == 0 || best == SCAN_POINTS - 1 {
        return Err(ZetaError::Regime(format!(
            "minimum at the scan boundary for |a| = {abs_a}"
        )));
    }
    if minima.len() != 1 {
        return Err(ZetaError::Regime(format!(
            "expected one interior minimum for |a| = {abs_a}, found {}",
            minima.len()
        )));
    }
    let (mut lo, mut hi) = (grid[best - 1], grid[best + 1]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let theta0 = 0.5 * (lo + hi);
    Ok(MinimumResult {
        n,
        abs_a,
        theta0,
        s_min: f(theta0),
    })
}

/// One sweep point: the angle and either the sample or why it failed.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub theta_over_pi: f64,
    pub result: Result<MultiplierSample>,
}

/// `count` evenly spaced angles from `lo` to `hi`, in units of π.
pub fn theta_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi < 1.0 && lo <= hi) || count == 0 || (count == 1 && lo != hi) {
        return Err(ZetaError::InvalidInput(format!(
            "theta range {lo}:{hi}:{count} must satisfy 0 < lo <= hi < 1 (units of π)"
        )));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

/// S_n over a θ range (units of π). Points run in parallel; the output keeps
/// the grid order and every point appears, failed or not.
pub fn sweep(
    n: u32,
    abs_a: f64,
    s: &Complex,
    range: (f64, f64, usize),
    plans: &PlanSource,
    ctx: &PrecisionContext,
) -> Result<Vec<SweepPoint>> {
    let grid = theta_grid(range.0, range.1, range.2)?;
    Ok(grid
        .par_iter()
        .map(|&t| {
            let result = ZetaPoint::from_polar(s.clone(), abs_a, t, ctx).and_then(|p| match plans {
                PlanSource::Optimal => stokes_multiplier(n, &p, ctx),
                PlanSource::Pinned(plan) => stokes_multiplier_with_plan(n, &p, plan, ctx),
            });
            SweepPoint {
                theta_over_pi: t,
                result,
            }
        })
        .collect())
}

/// Width, in the units of `xs`, of a dip below 1 measured at half its depth,
/// by linear interpolation between the samples straddling the level.
pub fn dip_width(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return None;
    }
    let (imin, &ymin) = ys.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
    if ymin >= 1.0 {
        return None;
    }
    let level = 1.0 - 0.5 * (1.0 - ymin);
    let cross = |i: usize, j: usize| xs[i] + (level - ys[i]) * (xs[j] - xs[i]) / (ys[j] - ys[i]);
    let left = (0..imin).rev().find(|&i| ys[i] >= level).map(|i| cross(i, i + 1))?;
    let right = (imin + 1..ys.len())
        .find(|&j| ys[j] >= level)
        .map(|j| cross(j - 1, j))?;
    Some(right - left)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn single_mode_is_half_on_the_line() {
        for (n, a) in [(1, 6.0), (3, 2.5)] {
            assert_eq!(erf_approx(n, a, FRAC_PI_2, ApproxMode::Single), 0.5);
        }
    }

    #[test]
    fn double_mode_table_points() {
        let v = erf_approx(1, 6.0, 0.473089 * PI, ApproxMode::Double);
        assert!((v - 0.608463).abs() < 5e-7, "{v}");
        let v = erf_approx(1, 20.0, 0.492010 * PI, ApproxMode::Double);
        assert!((v - 0.779264).abs() < 5e-7, "{v}");
    }

    #[test]
    fn minimum_examples() {
        for (a, t, m) in [
            (1.0, 0.314363, 0.185967),
            (8.0, 0.479894, 0.657472),
            (15.0, 0.489331, 0.746192),
        ] {
            let r = find_minimum(1, a).unwrap();
            assert!((r.theta0_over_pi() - t).abs() < 5e-7, "{a}: {}", r.theta0_over_pi());
            assert!((r.s_min - m).abs() < 5e-7, "{a}: {}", r.s_min);
        }
        assert!(find_minimum(1, 0.5).is_err());
    }

    #[test]
    fn plateaus_and_monotone_recovery() {
        for a in [6.0, 10.0, 20.0] {
            assert!((erf_approx(1, a, 0.02 * PI, ApproxMode::Double) - 1.0).abs() < 1e-3);
            assert!((erf_approx(1, a, 0.98 * PI, ApproxMode::Double) - 1.0).abs() < 1e-3);
        }
        let mut prev: Option<MinimumResult> = None;
        for a in [1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0] {
            let r = find_minimum(1, a).unwrap();
            assert!(r.s_min > 0.0 && r.s_min < 1.0);
            if let Some(p) = prev {
                assert!(r.s_min > p.s_min && r.theta0 > p.theta0);
            }
            assert!(r.theta0 < FRAC_PI_2);
            prev = Some(r);
        }
    }

    #[test]
    fn first_multiplier_at_the_dip() {
        let c = ctx();
        let p = ZetaPoint::from_polar(c.complex(3), 6.0, 0.473089, &c).unwrap();
        let plan = TruncationPlan::new(vec![17], vec![17]).unwrap();
        let s = stokes_multiplier_with_plan(1, &p, &plan, &c).unwrap();
        assert!((s.re() - 0.608).abs() < 0.05, "{}", s.re());
        assert!(s.diagnostics["bernoulli_form_residual"] < 1e-45);
        assert!((-0.1..2.1).contains(&s.approx));
    }

    #[test]
    fn first_multiplier_plateau() {
        let c = ctx();
        let p = ZetaPoint::from_polar(c.complex(3), 6.0, 0.3, &c).unwrap();
        let s = stokes_multiplier(1, &p, &c).unwrap();
        assert!((s.re() - 1.0).abs() < 0.07, "{}", s.re());
    }

    #[test]
    fn second_multiplier_precision_budget() {
        let c = ctx();
        let plan = TruncationPlan::new(vec![18, 36], vec![18, 37]).unwrap();
        let p = ZetaPoint::from_polar(c.complex(2), 6.0, 0.5, &c).unwrap();
        let s = stokes_multiplier_with_plan(2, &p, &plan, &c).unwrap();
        assert!((s.re() - s.approx).abs() < 0.05, "{} vs {}", s.re(), s.approx);
        let k1 = s.diagnostics["abs_script_r_1"];
        let ratio = s.diagnostics["target_scale"] / k1;
        // the recovered e^(−24π) sits under the peeled e^(−12π)
        assert!(ratio < 1e-14, "{ratio:e}");

        let low = PrecisionContext::with_digits(30).unwrap();
        let p = ZetaPoint::from_polar(low.complex(2), 6.0, 0.5, &low).unwrap();
        match stokes_multiplier_with_plan(2, &p, &plan, &low) {
            Err(ZetaError::InsufficientPrecision { required_digits, .. }) => {
                assert!(required_digits > 30 && required_digits <= 60)
            }
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn plan_must_cover_n() {
        let c = ctx();
        let p = ZetaPoint::from_polar(c.complex(2), 6.0, 0.5, &c).unwrap();
        let plan = TruncationPlan::new(vec![18], vec![18]).unwrap();
        assert!(stokes_multiplier_with_plan(2, &p, &plan, &c).is_err());
        let q = ZetaPoint::from_polar(c.complex(1.05), 6.0, 0.5, &c).unwrap();
        assert!(stokes_multiplier(1, &q, &c).is_err());
    }

    #[test]
    fn sweep_keeps_order_and_failures() {
        let c = PrecisionContext::with_digits(30).unwrap();
        let plan = TruncationPlan::new(vec![18, 36], vec![18, 37]).unwrap();
        let pts = sweep(2, 6.0, &c.complex(2), (0.45, 0.55, 3), &PlanSource::Pinned(plan), &c).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.windows(2).all(|w| w[0].theta_over_pi < w[1].theta_over_pi));
        assert!(pts.iter().all(|p| p.result.is_err()));
        assert!(theta_grid(0.0, 0.5, 3).is_err());
        assert!(theta_grid(0.6, 0.5, 3).is_err());
    }

    #[test]
    fn dip_width_of_a_triangle() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| ((x - 5.0).abs() / 5.0).min(1.0)).collect();
        assert!((dip_width(&xs, &ys).unwrap() - 5.0).abs() < 1e-12);
        assert!(dip_width(&xs, &[1.0; 11]).is_none());
    }
}
