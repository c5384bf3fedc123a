//! Terminant function T_ν(z) = e^(πiν) Γ(ν)/(2πi) · Γ(1−ν, z).
//!
//! The incomplete gamma function is evaluated from convergent series on the
//! branch carried by the argument ray, so arguments beyond ±π need no
//! special treatment. The connection formula is still provided, both as an
//! explicit reduction and to cross-check the two branches.

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Result, ZetaError};
use crate::hp::{abs_f64, erf_hp, gamma_complex, pow_ray_prec, PrecisionContext, RayComplex};

/// Arguments wider than this must be reduced with [`reduce_arg`] first.
pub const MAX_QUERY_ARGUMENT: f64 = 2.0 * std::f64::consts::PI + 0.1;

/// Half-width of the excluded neighbourhoods in [`terminant_asymptotic`].
pub const REGIME_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct TerminantQuery {
    nu: Complex,
    z: RayComplex,
}

impl TerminantQuery {
    pub fn new(nu: Complex, z: RayComplex) -> Result<Self> {
        if z.modulus().is_zero() {
            return Err(ZetaError::InvalidInput("terminant argument must be nonzero".into()));
        }
        if z.argument().to_f64().abs() > MAX_QUERY_ARGUMENT {
            return Err(ZetaError::InvalidInput(format!(
                "terminant argument {} exceeds 2π + 0.1; reduce it first",
                z.argument().to_f64()
            )));
        }
        Ok(Self { nu, z })
    }

    // Reduction may leave the intermediate argument anywhere.
    fn new_unchecked(nu: Complex, z: RayComplex) -> Self {
        Self { nu, z }
    }

    pub fn nu(&self) -> &Complex {
        &self.nu
    }

    pub fn z(&self) -> &RayComplex {
        &self.z
    }

    pub fn phi(&self) -> f64 {
        self.z.argument().to_f64()
    }
}

enum Order {
    NonPositiveInteger(u32),
    General,
}

fn classify(alpha: &Complex, ctx: &PrecisionContext) -> Result<Order> {
    let prec = alpha.prec().0;
    let re = alpha.real();
    let nearest = Float::with_val(prec, re.round_ref());
    if nearest > 0 {
        return Ok(Order::General);
    }
    let d = Float::with_val(prec, Float::with_val(prec, re - &nearest).hypot_ref(alpha.imag()));
    if d.is_zero() {
        let m = (-nearest.to_f64()) as u32;
        return Ok(Order::NonPositiveInteger(m));
    }
    let detect = Float::with_val(prec, 10).pow(-(ctx.digits() as i32) / 2);
    if d < detect {
        return Err(ZetaError::IllConditioned {
            alpha: alpha.to_string_radix(10, Some(12)),
            distance: d.to_f64(),
        });
    }
    Ok(Order::General)
}

fn log10_abs(z: &Complex) -> f64 {
    if z.is_zero() {
        return f64::NEG_INFINITY;
    }
    let p = z.prec().0.max(64);
    let a = Float::with_val(p, z.abs_ref());
    Float::with_val(64, a.log10_ref()).to_f64()
}

struct Evaluated {
    value: Complex,
    /// Decimal digits lost to cancellation, measured on the computed terms.
    lost: f64,
}

/// Γ(α, z) on the branch fixed by `z.argument()`.
///
/// Nonpositive integer orders go through E₁(z) and the downward recurrence
/// Γ(α−1, z) = (Γ(α, z) − z^(α−1)e^(−z))/(α−1); all other orders use
/// Γ(α) − z^α Σ (−z)ⁿ/(n!(α+n)). The working precision starts inflated by
/// ⌈(|z| + max(Re z, 0))/ln 10⌉ digits and is raised again if the measured
/// cancellation exceeds it.
pub fn upper_gamma(alpha: &Complex, z: &RayComplex, ctx: &PrecisionContext) -> Result<Complex> {
    upper_gamma_with_inflation(alpha, z, ctx, 1.0)
}

/// [`upper_gamma`] with the initial inflation multiplied by `factor`.
pub fn upper_gamma_with_inflation(
    alpha: &Complex,
    z: &RayComplex,
    ctx: &PrecisionContext,
    factor: f64,
) -> Result<Complex> {
    if z.modulus().is_zero() {
        return Err(ZetaError::Domain("Γ(α, 0) is not evaluated".into()));
    }
    if z.argument().to_f64().abs() > 2.0 * std::f64::consts::PI + 1e-12 {
        return Err(ZetaError::Domain("upper_gamma needs |arg z| <= 2π".into()));
    }
    let order = classify(alpha, ctx)?;
    let zm = z.modulus().to_f64();
    let re_z = zm * z.argument().to_f64().cos();
    let mut extra = (factor * (zm + re_z.max(0.0)) / std::f64::consts::LN_10).ceil() as u32 + 10;
    for _ in 0..4 {
        let work = ctx.inflated(extra);
        let ev = match order {
            Order::NonPositiveInteger(m) => gamma_negative_integer(m, z, &work)?,
            Order::General => gamma_series(alpha, z, &work)?,
        };
        if ev.lost + 5.0 <= extra as f64 {
            return Ok(Complex::with_val(ctx.prec(), ev.value));
        }
        extra = ev.lost.ceil() as u32 + 15;
    }
    Err(ZetaError::NonConvergence("incomplete gamma precision inflation"))
}

fn gamma_series(alpha: &Complex, z: &RayComplex, work: &PrecisionContext) -> Result<Evaluated> {
    let prec = work.prec();
    let zv = z.value_prec(prec);
    let minus_z = Complex::with_val(prec, -&zv);
    let zm = z.modulus().to_f64();
    let eps = Float::with_val(prec, 2).pow(-(prec as i32));

    let mut t = Complex::with_val(prec, 1); // (−z)ⁿ/n!
    let mut sum = Complex::with_val(prec, 0);
    let mut max_term = f64::NEG_INFINITY;
    let mut n: u64 = 0;
    loop {
        let denom = Complex::with_val(prec, alpha + n);
        let term = Complex::with_val(prec, &t / &denom);
        sum += &term;
        let lt = log10_abs(&term);
        max_term = max_term.max(lt);
        if n as f64 > zm {
            let tm = Float::with_val(prec, term.abs_ref());
            let sm = Float::with_val(prec, sum.abs_ref());
            if tm <= sm * &eps {
                break;
            }
        }
        n += 1;
        t *= &minus_z;
        t /= n;
        if n > 100_000 + 10 * zm as u64 {
            return Err(ZetaError::NonConvergence("incomplete gamma series"));
        }
    }
    let z_alpha = pow_ray_prec(z, &Complex::with_val(prec, alpha), prec)?;
    let g = gamma_complex(&Complex::with_val(prec, alpha), work)?;
    let lower = Complex::with_val(prec, &z_alpha * &sum);
    let value = Complex::with_val(prec, &g - &lower);
    let scale = log10_abs(&g).max(log10_abs(&z_alpha) + max_term);
    let lost = (scale - log10_abs(&value)).max(0.0);
    Ok(Evaluated { value, lost })
}

/// E₁(z) = −γ − ln z − Σ_{n≥1} (−z)ⁿ/(n·n!) on the carried branch.
fn exp_integral_e1(z: &RayComplex, work: &PrecisionContext) -> Result<Evaluated> {
    let prec = work.prec();
    let zv = z.value_prec(prec);
    let minus_z = Complex::with_val(prec, -&zv);
    let zm = z.modulus().to_f64();
    let eps = Float::with_val(prec, 2).pow(-(prec as i32));
    let mut t = Complex::with_val(prec, &minus_z);
    let mut sum = Complex::with_val(prec, 0);
    let mut max_term = f64::NEG_INFINITY;
    let mut n: u64 = 1;
    loop {
        let term = Complex::with_val(prec, &t / n);
        sum += &term;
        max_term = max_term.max(log10_abs(&term));
        if n as f64 > zm {
            let tm = Float::with_val(prec, term.abs_ref());
            let sm = Float::with_val(prec, sum.abs_ref());
            if tm <= sm * &eps {
                break;
            }
        }
        n += 1;
        t *= &minus_z;
        t /= n;
        if n > 100_000 + 10 * zm as u64 {
            return Err(ZetaError::NonConvergence("E1 series"));
        }
    }
    let gamma_e = Float::with_val(prec, Constant::Euler);
    let ln_z = z.ln_prec(prec)?;
    let mut value = Complex::with_val(prec, -&ln_z) - &sum;
    value -= &gamma_e;
    let scale = max_term.max(log10_abs(&ln_z)).max(0.0);
    let lost = (scale - log10_abs(&value)).max(0.0);
    Ok(Evaluated { value, lost })
}

fn gamma_negative_integer(m: u32, z: &RayComplex, work: &PrecisionContext) -> Result<Evaluated> {
    let prec = work.prec();
    let e1 = exp_integral_e1(z, work)?;
    if m == 0 {
        return Ok(e1);
    }
    let zv = z.value_prec(prec);
    let z_inv = Complex::with_val(prec, zv.recip_ref());
    let exp_minus_z = Complex::with_val(prec, -&zv).exp();
    let mut g = e1.value.clone();
    // z^(a-1) e^(-z), starting at a = 0.
    let mut zt = Complex::with_val(prec, &exp_minus_z * &z_inv);
    let mut max_scale = log10_abs(&g).max(log10_abs(&zt));
    for step in 0..m {
        let a_minus_1 = -(step as i64) - 1;
        g -= &zt;
        g /= a_minus_1;
        zt *= &z_inv;
        max_scale = max_scale.max(log10_abs(&zt) + lgamma_log10(step + 1));
    }
    // Γ(−m, z) = ((−1)^m/m!)[E₁ − e^(−z)Σ_j (−1)^j j!/z^(j+1)]: the bracket is
    // compared against the largest of its pieces.
    let bracket = log10_abs(&g) + lgamma_log10(m + 1);
    let lost = e1.lost.max(0.0) + (max_scale - bracket).max(0.0);
    Ok(Evaluated { value: g, lost })
}

fn lgamma_log10(n: u32) -> f64 {
    // log10(n!) via Stirling with a small correction; exactness is not needed.
    if n < 2 {
        return 0.0;
    }
    let x = n as f64 + 1.0;
    ((x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)) / std::f64::consts::LN_10
}

/// Legendre continued fraction for Γ(α, z), Re z > 0 (modified Lentz).
///
/// Only used to cross-check [`upper_gamma`] away from the negative axis.
pub fn upper_gamma_continued_fraction(alpha: &Complex, z: &RayComplex, ctx: &PrecisionContext) -> Result<Complex> {
    if z.argument().to_f64().abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(ZetaError::Domain("continued fraction needs Re z > 0".into()));
    }
    let prec = ctx.prec() + 64;
    let zv = z.value_prec(prec);
    let tiny = Float::with_val(prec, 2).pow(-(prec as i32) * 2);
    let eps = Float::with_val(prec, 10).pow(-(ctx.working_digits() as i32 + 5));
    // b_0 = z + 1 − α, a_n = −n(n − α), b_n = z + 2n + 1 − α
    let mut b = Complex::with_val(prec, &zv + 1u32) - alpha;
    let mut c = Complex::with_val(prec, 1) / &tiny;
    let mut d = Complex::with_val(prec, b.recip_ref());
    let mut h = d.clone();
    for n in 1..200_000u32 {
        let n_minus_alpha = Complex::with_val(prec, n - Complex::with_val(prec, alpha));
        let an = Complex::with_val(prec, -n_minus_alpha * n);
        b += 2u32;
        d = Complex::with_val(prec, &an * &d) + &b;
        if d.is_zero() {
            d = Complex::with_val(prec, (&tiny, 0));
        }
        c = Complex::with_val(prec, &an / &c) + &b;
        if c.is_zero() {
            c = Complex::with_val(prec, (&tiny, 0));
        }
        d = Complex::with_val(prec, d.recip_ref());
        let delta = Complex::with_val(prec, &c * &d);
        h *= &delta;
        let dm1 = Float::with_val(prec, Complex::with_val(prec, &delta - 1u32).abs_ref());
        if dm1 < eps {
            let pre = Complex::with_val(prec, -&zv).exp() * pow_ray_prec(z, &Complex::with_val(prec, alpha), prec)?;
            return Ok(Complex::with_val(ctx.prec(), pre * h));
        }
    }
    Err(ZetaError::NonConvergence("incomplete gamma continued fraction"))
}

/// T_ν(z) = e^(πiν) Γ(ν)/(2πi) · Γ(1−ν, z).
pub fn terminant(q: &TerminantQuery, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let nu = Complex::with_val(prec, q.nu());
    let one_minus_nu = Complex::with_val(prec, 1 - &nu);
    let upper = upper_gamma(&one_minus_nu, q.z(), ctx)?;
    let g = gamma_complex(&nu, ctx)?;
    let pi = ctx.pi();
    let phase = Complex::with_val(
        prec,
        Complex::with_val(prec, &nu * Complex::with_val(prec, (0, &pi))).exp_ref(),
    );
    let two_pi_i = Complex::with_val(prec, (0, Float::with_val(prec, &pi * 2u32)));
    let t = Complex::with_val(prec, phase * g) * upper / two_pi_i;
    Ok(t)
}

/// An equivalent query with argument in (−π, π] and the affine map back:
/// `T(original) = multiplier·T(reduced) + offset`.
#[derive(Debug, Clone)]
pub struct ReducedQuery {
    pub query: TerminantQuery,
    pub multiplier: Complex,
    pub offset: Complex,
}

impl ReducedQuery {
    pub fn apply(&self, reduced_value: &Complex) -> Complex {
        let p = reduced_value.prec().0;
        Complex::with_val(p, &self.multiplier * reduced_value) + &self.offset
    }
}

/// Moves the argument into (−π, π] with T_ν(ze^(−πi)) = e^(2πiν)(T_ν(ze^(πi)) − 1),
/// applied as many times as needed.
pub fn reduce_arg(q: &TerminantQuery, ctx: &PrecisionContext) -> ReducedQuery {
    let prec = ctx.prec();
    let pi = ctx.pi();
    let two_pi = Float::with_val(prec, &pi * 2u32);
    let e2 = Complex::with_val(
        prec,
        Complex::with_val(prec, q.nu() * Complex::with_val(prec, (0, &two_pi))).exp_ref(),
    );
    let e2_inv = Complex::with_val(prec, e2.recip_ref());
    let mut mult = Complex::with_val(prec, 1);
    let mut off = Complex::with_val(prec, 0);
    let mut ray = q.z().clone();
    loop {
        let arg = Float::with_val(prec, ray.argument());
        if arg > pi {
            // T(w e^(πi)) = e^(−2πiν) T(w e^(−πi)) + 1
            off += &mult;
            mult *= &e2_inv;
            ray = ray.rotate(&Float::with_val(prec, -&two_pi));
        } else if arg <= Float::with_val(prec, -&pi) {
            // T(w e^(−πi)) = e^(2πiν)(T(w e^(πi)) − 1)
            off -= Complex::with_val(prec, &mult * &e2);
            mult *= &e2;
            ray = ray.rotate(&two_pi);
        } else {
            break;
        }
    }
    ReducedQuery {
        query: TerminantQuery::new_unchecked(q.nu().clone(), ray),
        multiplier: mult,
        offset: off,
    }
}

/// One application of the connection formula without range reduction:
/// `T_ν(z) = e^(2πiν)(T_ν(ze^(2πi)) − 1)`.
///
/// This is the step that turns an argument near −π into one near +π even
/// when the original is already principal.
pub fn connect_up(q: &TerminantQuery, ctx: &PrecisionContext) -> ReducedQuery {
    let prec = ctx.prec();
    let two_pi = Float::with_val(prec, ctx.pi() * 2u32);
    let e2 = Complex::with_val(
        prec,
        Complex::with_val(prec, q.nu() * Complex::with_val(prec, (0, &two_pi))).exp_ref(),
    );
    let offset = Complex::with_val(prec, -&e2);
    ReducedQuery {
        query: TerminantQuery::new_unchecked(q.nu().clone(), q.z().rotate(&two_pi)),
        multiplier: e2,
        offset,
    }
}

/// Residual |T_ν(ze^(−πi)) − e^(2πiν)(T_ν(ze^(πi)) − 1)| with both sides
/// evaluated directly on their own branches.
pub fn connection_residual(nu: &Complex, z: &RayComplex, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.prec();
    let pi = ctx.pi();
    let down = z.rotate(&Float::with_val(prec, -&pi));
    let up = z.rotate(&pi);
    let lhs = terminant(&TerminantQuery::new(nu.clone(), down)?, ctx)?;
    let t_up = terminant(&TerminantQuery::new(nu.clone(), up)?, ctx)?;
    let two_pi = Float::with_val(prec, &pi * 2u32);
    let e2 = Complex::with_val(
        prec,
        Complex::with_val(prec, nu * Complex::with_val(prec, (0, &two_pi))).exp_ref(),
    );
    let rhs = e2 * (t_up - 1u32);
    Ok(Float::with_val(prec, Complex::with_val(prec, &lhs - &rhs).abs_ref()))
}

/// The coefficient c(φ) of the smoothing regime: ½c² = 1 + i(φ−π) − e^(i(φ−π)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingCoefficient {
    pub phi: f64,
    pub c: Complex64,
}

impl SmoothingCoefficient {
    pub fn residual(&self) -> f64 {
        (0.5 * self.c * self.c - smoothing_rhs(self.phi)).norm()
    }
}

fn smoothing_rhs(phi: f64) -> Complex64 {
    let x = phi - std::f64::consts::PI;
    Complex64::new(1.0, x) - Complex64::new(0.0, x).exp()
}

/// c(φ) on the branch with c ≈ φ − π near φ = π, by Newton continuation from π.
pub fn c_of_phi(phi: f64) -> Result<SmoothingCoefficient> {
    let tau = 2.0 * std::f64::consts::PI;
    if !(phi > 0.0 && phi < tau) {
        return Err(ZetaError::Domain(format!("c(φ) needs φ in (0, 2π), got {phi}")));
    }
    let x_target = phi - std::f64::consts::PI;
    if x_target == 0.0 {
        return Ok(SmoothingCoefficient {
            phi,
            c: Complex64::new(0.0, 0.0),
        });
    }
    let steps = (x_target.abs() / 0.05).ceil().max(1.0) as usize;
    let mut c = Complex64::new(0.0, 0.0);
    for i in 1..=steps {
        let x = x_target * i as f64 / steps as f64;
        if i == 1 {
            c = Complex64::new(x, x * x / 6.0);
        }
        let rhs = smoothing_rhs(std::f64::consts::PI + x);
        let mut converged = false;
        for _ in 0..60 {
            let f = 0.5 * c * c - rhs;
            let dc = f / c;
            c -= dc;
            if dc.norm() <= 1e-16 * c.norm().max(1e-300) {
                converged = true;
                break;
            }
        }
        if !converged {
            let f = (0.5 * c * c - rhs).norm();
            if f > 1e-14 {
                return Err(ZetaError::NonConvergence("Newton iteration for c(φ)"));
            }
        }
    }
    let out = SmoothingCoefficient { phi, c };
    if out.residual() >= 1e-13 {
        return Err(ZetaError::NonConvergence("Newton iteration for c(φ)"));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// −π+ε ≤ φ ≤ π−ε: exponentially small away from the Stokes line.
    Away,
    /// ε ≤ φ ≤ 2π−ε: erf smoothing across φ = π.
    Smoothing,
}

/// Away-from-Stokes-line form
/// −i e^((π−φ)iν)/(1+e^(−iφ)) · e^(−z−|z|)/√(2π|z|).
pub fn terminant_away(q: &TerminantQuery, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let pi = ctx.pi();
    let phi = Float::with_val(prec, q.z().argument());
    let denom = Complex::with_val(prec, 1u32 + crate::hp::expi(&Float::with_val(prec, -&phi), prec));
    if Float::with_val(prec, denom.abs_ref()) < ctx.tol() {
        return Err(ZetaError::Regime("away form is singular at φ = ±π".into()));
    }
    let pm = Float::with_val(prec, &pi - &phi);
    let phase_arg = Complex::with_val(prec, q.nu() * Complex::with_val(prec, (0, &pm)));
    let phase = Complex::with_val(prec, phase_arg.exp_ref());
    let zv = q.z().value(ctx);
    let zm = Float::with_val(prec, q.z().modulus());
    let expo = (Complex::with_val(prec, -&zv) - &zm).exp();
    let root = Float::with_val(prec, Float::with_val(prec, &pi * 2u32) * &zm).sqrt();
    let minus_i = Complex::with_val(prec, (0, -1));
    Ok(minus_i * phase / denom * expo / root)
}

/// Smoothing form ½ + ½erf(c(φ)·√(|z|/2)).
pub fn terminant_smoothing(q: &TerminantQuery, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let c = c_of_phi(q.phi())?;
    let scale = (q.z().modulus().to_f64() / 2.0).sqrt();
    let w = Complex::with_val(prec, (c.c.re * scale, c.c.im * scale));
    let e = erf_hp(&w, ctx);
    Ok(Complex::with_val(prec, e / 2u32) + Float::with_val(prec, 0.5))
}

/// Leading behaviour of T_ν(z) for |ν| ≈ |z| ≫ 1, choosing the smoothing
/// form wherever both apply.
pub fn terminant_asymptotic(q: &TerminantQuery, ctx: &PrecisionContext) -> Result<(Complex, Regime)> {
    let zm = q.z().modulus().to_f64();
    let ratio = abs_f64(q.nu()) / zm;
    if zm < 10.0 || !(0.5..=2.0).contains(&ratio) {
        return Err(ZetaError::Regime(format!(
            "need |z| >= 10 and |ν|/|z| in [0.5, 2]; got |z| = {zm}, ratio = {ratio}"
        )));
    }
    let phi = q.phi();
    let pi = std::f64::consts::PI;
    if phi >= REGIME_MARGIN && phi <= 2.0 * pi - REGIME_MARGIN {
        Ok((terminant_smoothing(q, ctx)?, Regime::Smoothing))
    } else if phi >= -pi + REGIME_MARGIN && phi <= pi - REGIME_MARGIN {
        Ok((terminant_away(q, ctx)?, Regime::Away))
    } else {
        Err(ZetaError::Regime(format!("φ = {phi} lies in neither regime")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::abs_diff;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn ray(m: f64, turns: f64) -> RayComplex {
        RayComplex::from_turns(m, turns, &ctx()).unwrap()
    }

    #[test]
    fn order_one_is_exponential() {
        let c = ctx();
        let v = upper_gamma(&c.complex(1), &ray(1.0, 0.0), &c).unwrap();
        let e = c.complex(Float::with_val(c.prec(), -1).exp());
        assert!(abs_diff(&v, &e) < c.tol());
    }

    #[test]
    fn terminant_at_order_one() {
        // T_1(1) = −E₁(1)/(2πi)
        let c = ctx();
        let q = TerminantQuery::new(c.complex(1), ray(1.0, 0.0)).unwrap();
        let t = terminant(&q, &c).unwrap();
        let e1 = upper_gamma(&c.complex(0), &ray(1.0, 0.0), &c).unwrap();
        let two_pi_i = c.complex((0, c.pi() * 2u32));
        let expected = Complex::with_val(c.prec(), -e1 / two_pi_i);
        assert!(abs_diff(&t, &expected) < c.tol());
    }

    #[test]
    fn near_integer_order_is_ill_conditioned() {
        let c = ctx();
        let alpha = Complex::with_val(c.prec(), -5) + Float::with_val(c.prec(), 1e-40);
        let r = upper_gamma(&alpha, &ray(10.0, 0.5), &c);
        assert!(matches!(r, Err(ZetaError::IllConditioned { .. })));
        // Away from the detection radius the general series is used.
        let alpha = c.complex(-5.25);
        assert!(upper_gamma(&alpha, &ray(10.0, 0.5), &c).is_ok());
    }

    #[test]
    fn continued_fraction_cross_check() {
        let c = ctx();
        for (alpha, m, t) in [
            (-3.5, 20.0, 0.2),
            (-20.0, 30.0, -0.3),
            (2.5, 15.0, 0.1),
            (-7.0, 25.0, 0.4),
        ] {
            let a = c.complex(alpha);
            let z = ray(m, t);
            let s = upper_gamma(&a, &z, &c).unwrap();
            let f = upper_gamma_continued_fraction(&a, &z, &c).unwrap();
            let rel = crate::hp::rel_diff(&s, &f, 0.0);
            assert!(rel < 1e-45, "alpha = {alpha}, rel = {rel:e}");
        }
    }

    #[test]
    fn reduce_arg_identity_in_range() {
        let c = ctx();
        let q = TerminantQuery::new(c.complex(7), ray(10.0, 0.5)).unwrap();
        let r = reduce_arg(&q, &c);
        assert_eq!(r.multiplier, c.complex(1));
        assert_eq!(r.offset, c.complex(0));
        assert_eq!(r.query, q);
    }

    #[test]
    fn c_of_phi_branch() {
        assert_eq!(c_of_phi(std::f64::consts::PI).unwrap().c, Complex64::new(0.0, 0.0));
        let c = c_of_phi(std::f64::consts::PI + 0.1).unwrap();
        assert!((c.c - Complex64::new(0.1, 0.01 / 6.0)).norm() < 1e-3);
        assert!(c.residual() < 1e-13);
        let c = c_of_phi(0.6 * std::f64::consts::PI).unwrap();
        assert!(c.c.re < 0.0);
        assert!(c_of_phi(0.0).is_err());
        assert!(c_of_phi(7.0).is_err());
    }

    #[test]
    fn asymptotic_regime_selection() {
        let c = ctx();
        let q = TerminantQuery::new(c.complex(60), ray(60.0, 1.0)).unwrap();
        let (v, regime) = terminant_asymptotic(&q, &c).unwrap();
        assert_eq!(regime, Regime::Smoothing);
        assert!(abs_diff(&v, &c.complex(0.5)) < c.tol());
        let q = TerminantQuery::new(c.complex(60), ray(60.0, -0.5)).unwrap();
        assert_eq!(terminant_asymptotic(&q, &c).unwrap().1, Regime::Away);
        let q = TerminantQuery::new(c.complex(60), ray(60.0, -0.99)).unwrap();
        assert!(terminant_asymptotic(&q, &c).is_err());
        let q = TerminantQuery::new(c.complex(200), ray(60.0, 0.5)).unwrap();
        assert!(terminant_asymptotic(&q, &c).is_err());
    }

    #[test]
    fn e1_at_one_matches_rational_series() {
        // −γ + Σ_{n≥1} (−1)^(n+1)/(n·n!) with exact rational partial sums
        let c = ctx();
        let mut acc = rug::Rational::new();
        let mut fact = rug::Integer::from(1);
        for n in 1..120u32 {
            fact *= n;
            let term = rug::Rational::from((rug::Integer::from(1), rug::Integer::from(&fact * n)));
            if n % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let expected = Float::with_val(c.prec(), &acc) - Float::with_val(c.prec(), Constant::Euler);
        let v = upper_gamma(&c.complex(0), &ray(1.0, 0.0), &c).unwrap();
        assert!(abs_diff(&v, &c.complex(expected)) < c.tol());
        assert!((v.real().to_f64() - 0.219_383_934_395_520_3).abs() < 1e-15);
    }

    fn recurrence_residual(alpha: &Complex, z: &RayComplex, c: &PrecisionContext) -> f64 {
        // Γ(α+1, z) = αΓ(α, z) + z^α e^(−z)
        let p = c.prec();
        let g0 = upper_gamma(alpha, z, c).unwrap();
        let g1 = upper_gamma(&Complex::with_val(p, alpha + 1u32), z, c).unwrap();
        let za = pow_ray_prec(z, alpha, p).unwrap();
        let ez = Complex::with_val(p, -z.value(c)).exp();
        let forcing = Complex::with_val(p, &za * &ez);
        let scaled = Complex::with_val(p, alpha * &g0);
        let scale = abs_f64(&g1).max(abs_f64(&scaled)).max(abs_f64(&forcing));
        let resid = Complex::with_val(p, &g1 - &scaled) - &forcing;
        abs_f64(&resid) / scale
    }

    #[test]
    fn recurrence_residual_single_point() {
        let c = ctx();
        let r = recurrence_residual(&c.complex(-3.5), &ray(20.0, 0.9), &c);
        assert!(r < 1e-52, "residual {r:e}");
    }

    #[test]
    fn recurrence_residual_grid() {
        let c = ctx();
        let tol = 10f64.powi(-(c.digits() as i32) + 8);
        let alphas = [c.complex(-40.5), c.complex((-20.0, 0.5)), c.complex(0), c.complex(-36)];
        for m in [20.0, 40.0, 80.0] {
            for t in [0.2, -0.2, 0.6, -0.6, 1.0, -1.0] {
                for a in &alphas {
                    let r = recurrence_residual(a, &ray(m, t), &c);
                    assert!(r < tol, "|z| = {m}, arg = {t}π, alpha = {a}: {r:e}");
                }
            }
        }
    }

    #[test]
    fn double_inflation_is_stable() {
        let c = ctx();
        for (a, m, t) in [(-36.0, 80.0, -0.2), (-40.5, 60.0, 1.0), (-17.0, 37.7, 0.5)] {
            let alpha = c.complex(a);
            let z = ray(m, t);
            let v1 = upper_gamma(&alpha, &z, &c).unwrap();
            let v2 = upper_gamma_with_inflation(&alpha, &z, &c, 2.0).unwrap();
            let rel = crate::hp::rel_diff(&v1, &v2, 0.0);
            assert!(rel < 10f64.powi(-(c.digits() as i32) + 5), "{rel:e}");
        }
    }

    #[test]
    fn connection_identity_on_sample_points() {
        let c = ctx();
        let tol = c.tol();
        for (nu, m, t) in [
            ((37.0, 0.0), 37.7, 0.02),
            ((12.5, 0.5), 20.0, -0.3),
            ((71.0, -0.5), 55.0, 0.7),
        ] {
            let r = connection_residual(&c.complex(nu), &ray(m, t), &c).unwrap();
            assert!(r < tol, "nu = {nu:?}: {}", r.to_f64());
        }
    }

    #[test]
    fn reduce_arg_round_trip() {
        let c = ctx();
        for t in [1.5, -1.3, 2.0] {
            let q = TerminantQuery::new(c.complex((20.0, 0.5)), ray(18.0, t)).unwrap();
            let direct = terminant(&q, &c).unwrap();
            let r = reduce_arg(&q, &c);
            let phi = r.query.phi();
            assert!(phi > -std::f64::consts::PI && phi <= std::f64::consts::PI + 1e-12);
            let via = r.apply(&terminant(&r.query, &c).unwrap());
            assert!(abs_diff(&direct, &via) < c.tol(), "t = {t}");
        }
    }

    #[test]
    fn connect_up_from_near_minus_pi() {
        // z = w·e^(−πi) with arg w = 0.02π
        let c = ctx();
        let nu = c.complex(37);
        let q = TerminantQuery::new(nu.clone(), ray(37.7, -0.98)).unwrap();
        let r = connect_up(&q, &c);
        assert!((r.query.phi() / std::f64::consts::PI - 1.02).abs() < 1e-12);
        let e2 = Complex::with_val(
            c.prec(),
            Complex::with_val(c.prec(), &nu * Complex::with_val(c.prec(), (0, c.pi() * 2u32))).exp_ref(),
        );
        assert!(abs_diff(&r.multiplier, &e2) < c.tol());
        assert!(abs_diff(&r.offset, &Complex::with_val(c.prec(), -&e2)) < c.tol());
        let direct = terminant(&q, &c).unwrap();
        let via = r.apply(&terminant(&r.query, &c).unwrap());
        assert!(abs_diff(&direct, &via) < c.tol());
    }

    #[test]
    fn stokes_line_value_near_half() {
        let c = ctx();
        for m in [30.0, 60.0, 100.0] {
            let q = TerminantQuery::new(c.complex(m), ray(m, 1.0)).unwrap();
            let t = terminant(&q, &c).unwrap();
            let d = abs_f64(&(t - Float::with_val(c.prec(), 0.5)));
            assert!(d <= 2.0 / m.sqrt(), "|z| = {m}: {d}");
        }
    }

    #[test]
    fn away_form_relative_agreement() {
        let c = ctx();
        for (m, t) in [(40.0, 0.3), (60.0, 0.3), (50.0, -0.5)] {
            let q = TerminantQuery::new(c.complex(m), ray(m, t)).unwrap();
            let exact = terminant(&q, &c).unwrap();
            let approx = terminant_away(&q, &c).unwrap();
            let rel = crate::hp::rel_diff(&approx, &exact, 0.0);
            assert!(rel < 5.0 / m, "|z| = {m}, arg = {t}π: {rel}");
        }
    }

    #[test]
    fn smoothing_form_absolute_agreement() {
        let c = ctx();
        let m = 50.0;
        let q = TerminantQuery::new(c.complex(m), ray(m, 0.9)).unwrap();
        let exact = terminant(&q, &c).unwrap();
        let (approx, regime) = terminant_asymptotic(&q, &c).unwrap();
        assert_eq!(regime, Regime::Smoothing);
        let cc = c_of_phi(q.phi()).unwrap().c;
        let bound = 5.0 / m.sqrt() * (-0.5 * m * (cc * cc).re).exp();
        let d = abs_diff(&approx, &exact).to_f64();
        assert!(d < bound, "{d} vs {bound}");
    }

    #[test]
    fn c_of_phi_defining_equation_at_0_6_pi() {
        let phi = 0.6 * std::f64::consts::PI;
        let c = c_of_phi(phi).unwrap().c;
        let h = 0.5 * c * c;
        let x = phi - std::f64::consts::PI;
        assert!((h.re - (1.0 - x.cos())).abs() < 1e-13);
        assert!((h.im - (x - x.sin())).abs() < 1e-13);
    }

    #[test]
    fn query_argument_bound() {
        let c = ctx();
        assert!(TerminantQuery::new(c.complex(3), ray(5.0, 2.1)).is_err());
        assert!(TerminantQuery::new(c.complex(3), ray(0.0, 0.0)).is_err());
    }
}
