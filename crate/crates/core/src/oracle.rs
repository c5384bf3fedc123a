//! Reference values by direct convergent summation.
//!
//! Everything here is independent of the expansion machinery: ζ(s,a) by
//! Euler–Maclaurin, F(a,1−s) by its geometrically convergent series, and
//! the derived Z(s,a) and F̃(a,s).

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Result, ZetaError};
use crate::hp::{bernoulli_even, gamma_complex, pow_ray, pow_ray_prec, PrecisionContext, RayComplex};

/// Lower bound on Re(s) accepted by the oracle sums.
pub const ORACLE_MIN_RE_S: f64 = 1.1;

/// A point (s, a) in the upper half-plane together with a′ = 1 − a.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaPoint {
    s: Complex,
    a: RayComplex,
    a_prime: RayComplex,
}

impl ZetaPoint {
    pub fn new(s: Complex, a: RayComplex, ctx: &PrecisionContext) -> Result<Self> {
        let pi = ctx.pi();
        if *a.argument() <= 0 || *a.argument() >= pi {
            return Err(ZetaError::Domain(format!(
                "arg a must lie in (0, π), got {}",
                a.argument().to_f64()
            )));
        }
        if a.modulus().is_zero() {
            return Err(ZetaError::Domain("a must be nonzero".into()));
        }
        check_not_nonpositive_integer(&s, ctx)?;
        let one_minus = Complex::with_val(ctx.prec(), 1 - a.value(ctx));
        // Im a > 0 puts a′ strictly in the lower half-plane, so the principal
        // argument is the continuous one (a·e^(−πi) reading for large |a|).
        let a_prime = RayComplex::principal(&one_minus);
        Ok(Self { s, a, a_prime })
    }

    /// `a = |a|·e^(iπ·theta_over_pi)`.
    pub fn from_polar(s: Complex, abs_a: f64, theta_over_pi: f64, ctx: &PrecisionContext) -> Result<Self> {
        let a = RayComplex::from_turns(abs_a, theta_over_pi, ctx)?;
        Self::new(s, a, ctx)
    }

    pub fn s(&self) -> &Complex {
        &self.s
    }

    pub fn a(&self) -> &RayComplex {
        &self.a
    }

    pub fn a_prime(&self) -> &RayComplex {
        &self.a_prime
    }

    pub fn theta(&self) -> &Float {
        self.a.argument()
    }
}

fn check_not_nonpositive_integer(s: &Complex, ctx: &PrecisionContext) -> Result<()> {
    let re = s.real();
    if *re > 0.5 {
        return Ok(());
    }
    let nearest = Float::with_val(ctx.prec(), re.round_ref());
    let d = Float::with_val(
        ctx.prec(),
        Float::with_val(ctx.prec(), re - &nearest).hypot_ref(s.imag()),
    );
    if d < ctx.tol() {
        return Err(ZetaError::Domain(format!(
            "s = {} is a nonpositive integer",
            nearest.to_f64()
        )));
    }
    Ok(())
}

/// ζ(s, a) for Re(s) > 1.1 by Euler–Maclaurin summation.
pub fn hurwitz_zeta_direct(s: &Complex, a: &RayComplex, ctx: &PrecisionContext) -> Result<Complex> {
    let wd = ctx.working_digits() as f64;
    let s_abs = crate::hp::abs_f64(s);
    let cutoff = (wd + 2.0 * s_abs + a.modulus().to_f64()).ceil() as u32;
    hurwitz_zeta_em(s, a, cutoff, ctx)
}

/// Euler–Maclaurin with an explicit number of directly summed terms.
pub fn hurwitz_zeta_em(s: &Complex, a: &RayComplex, cutoff: u32, ctx: &PrecisionContext) -> Result<Complex> {
    if s.real().to_f64() <= ORACLE_MIN_RE_S {
        return Err(ZetaError::Domain(format!(
            "oracle requires Re(s) > {ORACLE_MIN_RE_S}, got {}",
            s.real().to_f64()
        )));
    }
    let pi = ctx.pi();
    if Float::with_val(ctx.prec(), a.argument().abs_ref()) >= pi {
        return Err(ZetaError::Domain("hurwitz_zeta_direct needs |arg a| < π".into()));
    }
    let prec = ctx.prec() + 32;
    let a_val = a.value_prec(prec);
    if a.modulus().is_zero() {
        return Err(ZetaError::Domain("a = 0".into()));
    }

    let neg_s = Complex::with_val(prec, -s);
    let mut sum = Complex::with_val(prec, 0);
    for k in 0..cutoff {
        let w = Complex::with_val(prec, &a_val + k);
        sum += pow_ray_prec(&RayComplex::principal(&w), &neg_s, prec)?;
    }

    let w = Complex::with_val(prec, &a_val + cutoff);
    let w_ray = RayComplex::principal(&w);
    let w_neg_s = pow_ray_prec(&w_ray, &neg_s, prec)?;
    let s_minus_1 = Complex::with_val(prec, s - 1u32);
    // w^(1-s)/(s-1) + w^(-s)/2
    let mut tail = Complex::with_val(prec, &w_neg_s * &w) / &s_minus_1;
    tail += Complex::with_val(prec, &w_neg_s / 2u32);

    let eps = Float::with_val(prec, 10).pow(-(ctx.working_digits() as i32 + 2));
    let w_inv = Complex::with_val(prec, w.recip_ref());
    let w_inv2 = Complex::with_val(prec, w_inv.square_ref());
    // running (s)_{2p-1} · w^(-s-2p+1)
    let mut run = Complex::with_val(prec, s * &w_neg_s) * &w_inv;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for p in 1..=4 * ctx.working_digits() as usize {
        let b = bernoulli_even(p)?;
        let fact = rug::Integer::factorial(2 * p as u32);
        let coeff = Float::with_val(prec, &b) / Float::with_val(prec, rug::Complete::complete(fact));
        let term = Complex::with_val(prec, &run * &coeff);
        tail += &term;
        let mag = Float::with_val(prec, term.abs_ref());
        let total = Float::with_val(prec, Complex::with_val(prec, &sum + &tail).abs_ref());
        if mag <= Float::with_val(prec, &total * &eps) {
            converged = true;
            break;
        }
        let m = mag.to_f64();
        if m > prev {
            break;
        }
        prev = m;
        // (s)_{2p+1} / (s)_{2p-1} = (s+2p-1)(s+2p)
        let f1 = Complex::with_val(prec, s + (2 * p as u32 - 1));
        let f2 = Complex::with_val(prec, s + 2 * p as u32);
        run *= f1;
        run *= f2;
        run *= &w_inv2;
    }
    if !converged {
        return Err(ZetaError::NonConvergence("Euler–Maclaurin tail"));
    }
    Ok(Complex::with_val(ctx.prec(), sum + tail))
}

/// Z(s,a) = Γ(s)·(ζ(s,a) − ½a^(−s) − a^(1−s)/(s−1)).
pub fn z_reference(s: &Complex, a: &RayComplex, ctx: &PrecisionContext) -> Result<Complex> {
    let s_minus_1 = Complex::with_val(ctx.prec(), s - 1u32);
    if Float::with_val(ctx.prec(), s_minus_1.abs_ref()) < ctx.tol() {
        return Err(ZetaError::Pole {
            function: "Z(s,a) at s = 1",
            distance: crate::hp::abs_f64(&s_minus_1),
        });
    }
    let zeta = hurwitz_zeta_direct(s, a, ctx)?;
    let alg = algebraic_part(s, a, ctx)?;
    let g = gamma_complex(s, ctx)?;
    Ok(Complex::with_val(ctx.prec(), (zeta - alg) * g))
}

/// ½a^(−s) + a^(1−s)/(s−1) on a's carried branch.
pub fn algebraic_part(s: &Complex, a: &RayComplex, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let neg_s = Complex::with_val(prec, -s);
    let a_neg_s = pow_ray(a, &neg_s, ctx)?;
    let one_minus_s = Complex::with_val(prec, 1 - s);
    let a_1ms = pow_ray(a, &one_minus_s, ctx)?;
    let s_minus_1 = Complex::with_val(prec, s - 1u32);
    if s_minus_1.is_zero() {
        return Err(ZetaError::Pole {
            function: "a^(1-s)/(s-1)",
            distance: 0.0,
        });
    }
    Ok(Complex::with_val(prec, a_neg_s / 2u32) + Complex::with_val(prec, a_1ms / s_minus_1))
}

/// Direct sum with its certified tail bound.
#[derive(Debug, Clone)]
pub struct BoundedSum {
    pub value: Complex,
    pub tail_bound: Float,
    pub terms: u64,
}

/// F(a, 1−s) = Σ_{k≥1} k^(s−1) e^(2πika).
pub fn periodic_zeta_direct(point: &ZetaPoint, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(periodic_zeta_bounded(point, ctx)?.value)
}

/// [`periodic_zeta_direct`] with the geometric tail bound of the discarded terms.
pub fn periodic_zeta_bounded(point: &ZetaPoint, ctx: &PrecisionContext) -> Result<BoundedSum> {
    let prec = ctx.prec() + 32;
    let a = point.a().value_prec(prec);
    if *a.imag() <= 0 {
        return Err(ZetaError::Domain("periodic zeta sum diverges for Im a <= 0".into()));
    }
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let q = Complex::with_val(prec, Complex::with_val(prec, (0, &two_pi)) * &a).exp();
    let q_abs = Float::with_val(prec, q.abs_ref()).to_f64();
    let sigma_m1 = point.s().real().to_f64() - 1.0;
    let s_m1 = Complex::with_val(prec, point.s() - 1u32);
    let eps = Float::with_val(prec, 10).pow(-(ctx.working_digits() as i32 + 2));

    let mut qk = q.clone();
    let mut sum = Complex::with_val(prec, 0);
    let mut k: u64 = 1;
    loop {
        let lnk = Float::with_val(prec, k).ln();
        let kpow = Complex::with_val(prec, &s_m1 * lnk).exp();
        let term = Complex::with_val(prec, kpow * &qk);
        sum += &term;
        let mag = Float::with_val(prec, term.abs_ref());
        let ratio = q_abs * (1.0f64).max(((k + 2) as f64 / (k + 1) as f64).powf(sigma_m1));
        if ratio < 1.0 {
            let bound = Float::with_val(prec, &mag * (ratio / (1.0 - ratio)));
            let total = Float::with_val(prec, sum.abs_ref());
            if bound <= Float::with_val(prec, &total * &eps) {
                return Ok(BoundedSum {
                    value: Complex::with_val(ctx.prec(), sum),
                    tail_bound: Float::with_val(ctx.prec(), bound),
                    terms: k,
                });
            }
        }
        if k > 10_000_000 {
            return Err(ZetaError::NonConvergence("periodic zeta sum"));
        }
        k += 1;
        qk *= &q;
    }
}

/// The pieces of F̃(a,s), kept for precision budgeting.
#[derive(Debug, Clone)]
pub struct FTildeParts {
    /// F(a, 1−s).
    pub periodic: Complex,
    /// Γ(s)(2π)^(−s) e^(iπs/2)(½a^(−s) + a^(1−s)/(s−1)).
    pub algebraic_a: Complex,
    /// Γ(s)(2π)^(−s) e^(−iπs/2)(½a′^(−s) + a′^(1−s)/(s−1)).
    pub algebraic_a_prime: Complex,
    pub value: Complex,
    pub tail_bound: Float,
}

impl FTildeParts {
    /// Largest magnitude among the cancelling constituents.
    pub fn scale(&self) -> f64 {
        [&self.periodic, &self.algebraic_a, &self.algebraic_a_prime]
            .iter()
            .map(|z| crate::hp::abs_f64(z))
            .fold(0.0, f64::max)
    }
}

/// F̃(a,s): F(a,1−s) with the algebraic parts of both Hurwitz functions removed.
pub fn f_tilde_reference(point: &ZetaPoint, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(f_tilde_parts(point, ctx)?.value)
}

pub fn f_tilde_parts(point: &ZetaPoint, ctx: &PrecisionContext) -> Result<FTildeParts> {
    let prec = ctx.prec();
    let s = point.s();
    let periodic = periodic_zeta_bounded(point, ctx)?;
    let pref = gamma_prefactor(s, ctx)?;
    let (e_plus, e_minus) = half_turn_phases(s, ctx);
    let alg_a = algebraic_part(s, point.a(), ctx)?;
    let alg_ap = algebraic_part(s, point.a_prime(), ctx)?;
    let algebraic_a = Complex::with_val(prec, &pref * &e_plus) * alg_a;
    let algebraic_a_prime = Complex::with_val(prec, &pref * &e_minus) * alg_ap;
    let value = Complex::with_val(prec, &periodic.value - &algebraic_a) - &algebraic_a_prime;
    Ok(FTildeParts {
        periodic: periodic.value,
        algebraic_a,
        algebraic_a_prime,
        value,
        tail_bound: periodic.tail_bound,
    })
}

/// Right-hand side of the Hurwitz formula for F(a, 1−s):
/// Γ(s)(2π)^(−s){e^(iπs/2)ζ(s,a) + e^(−iπs/2)ζ(s,a′)}.
pub fn periodic_zeta_via_hurwitz(point: &ZetaPoint, ctx: &PrecisionContext) -> Result<Complex> {
    let s = point.s();
    let pref = gamma_prefactor(s, ctx)?;
    let (e_plus, e_minus) = half_turn_phases(s, ctx);
    let za = hurwitz_zeta_direct(s, point.a(), ctx)?;
    let zp = hurwitz_zeta_direct(s, point.a_prime(), ctx)?;
    let inner = Complex::with_val(ctx.prec(), e_plus * za) + e_minus * zp;
    Ok(Complex::with_val(ctx.prec(), pref * inner))
}

/// (2π)^(−s){e^(iπs/2)Z(s,a) + e^(−iπs/2)Z(s,a′)}, which equals F̃(a,s).
pub fn f_tilde_via_z(point: &ZetaPoint, ctx: &PrecisionContext) -> Result<Complex> {
    let s = point.s();
    let g = gamma_complex(s, ctx)?;
    let pref = gamma_prefactor(s, ctx)?;
    let scale = Complex::with_val(ctx.prec(), pref / g);
    let (e_plus, e_minus) = half_turn_phases(s, ctx);
    let za = z_reference(s, point.a(), ctx)?;
    let zp = z_reference(s, point.a_prime(), ctx)?;
    let inner = Complex::with_val(ctx.prec(), e_plus * za) + e_minus * zp;
    Ok(Complex::with_val(ctx.prec(), scale * inner))
}

/// Γ(s)/(2π)^s.
pub fn gamma_prefactor(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let g = gamma_complex(s, ctx)?;
    let two_pi = ctx.pi() * 2u32;
    let ray = RayComplex::new(two_pi, ctx.real(0))?;
    let p = pow_ray(&ray, s, ctx)?;
    Ok(Complex::with_val(ctx.prec(), g / p))
}

/// (e^(iπs/2), e^(−iπs/2)).
pub fn half_turn_phases(s: &Complex, ctx: &PrecisionContext) -> (Complex, Complex) {
    let prec = ctx.prec();
    let w = Complex::with_val(prec, s * Complex::with_val(prec, (0, ctx.pi() / 2u32)));
    let plus = Complex::with_val(prec, w.exp_ref());
    let minus = Complex::with_val(prec, plus.recip_ref());
    (plus, minus)
}
