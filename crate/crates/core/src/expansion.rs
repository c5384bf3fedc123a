//! Exponentially improved expansion of Z(s,a) and of F̃(a,s).
//!
//! Z(s,a) = (2π)^s Σ_k k^(s−1){(1/π) Σ_{r<N_k} A_r(ka) + R_k(a; N_k)}, exact
//! for any choice of the truncation indices. Scales k ≤ K are evaluated
//! with their terminant remainders; for k > K the remainders are
//! exponentially small and the algebraic series is continued with
//! ζ(2r+2, K+1) blocks until its terms drop below the working tolerance.

use rayon::prelude::*;
use rug::{Complex, Float, Integer};

use crate::error::{Result, ZetaError};
use crate::hp::{abs_f64, bernoulli_even, gamma_complex, hurwitz_zeta_integer, pow_ray, PrecisionContext, RayComplex};
use crate::oracle::{half_turn_phases, ZetaPoint};
use crate::terminant::{connect_up, terminant, TerminantQuery};

/// Truncation indices N_1..N_K for a and N′_1..N′_K for a′.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationPlan {
    nk: Vec<u32>,
    nk_prime: Vec<u32>,
}

impl TruncationPlan {
    pub fn new(nk: Vec<u32>, nk_prime: Vec<u32>) -> Result<Self> {
        if nk.is_empty() || nk.len() != nk_prime.len() {
            return Err(ZetaError::InvalidInput(format!(
                "plan needs equal nonempty index lists, got {} and {}",
                nk.len(),
                nk_prime.len()
            )));
        }
        if nk.iter().chain(nk_prime.iter()).any(|&n| n == 0) {
            return Err(ZetaError::InvalidInput("truncation indices must be >= 1".into()));
        }
        Ok(Self { nk, nk_prime })
    }

    pub fn constant(n: u32, k_max: usize) -> Result<Self> {
        Self::new(vec![n; k_max], vec![n; k_max])
    }

    /// Least-term indices for every scale k ≤ k_max, for a and a′ separately.
    pub fn optimal(point: &ZetaPoint, k_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        let nk = (1..=k_max)
            .map(|k| optimal_truncation(k as u32, point.s(), point.a(), ctx))
            .collect::<Result<Vec<_>>>()?;
        let nkp = (1..=k_max)
            .map(|k| optimal_truncation(k as u32, point.s(), point.a_prime(), ctx))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nk, nkp)
    }

    /// Every index moved by `delta`.
    pub fn shifted(&self, delta: i32) -> Result<Self> {
        let shift = |v: &[u32]| -> Result<Vec<u32>> {
            v.iter()
                .map(|&n| {
                    let m = n as i64 + delta as i64;
                    if m < 1 {
                        Err(ZetaError::InvalidInput(format!("shift {delta} makes an index < 1")))
                    } else {
                        Ok(m as u32)
                    }
                })
                .collect()
        };
        Self::new(shift(&self.nk)?, shift(&self.nk_prime)?)
    }

    /// The first `k_max` scales of this plan, or the plan extended by
    /// repeating its last entries.
    pub fn with_k_max(&self, k_max: usize) -> Result<Self> {
        let fit = |v: &[u32]| -> Vec<u32> {
            let last = *v.last().expect("nonempty");
            (0..k_max).map(|i| v.get(i).copied().unwrap_or(last)).collect()
        };
        Self::new(fit(&self.nk), fit(&self.nk_prime))
    }

    pub fn k_max(&self) -> usize {
        self.nk.len()
    }

    pub fn nk(&self) -> &[u32] {
        &self.nk
    }

    pub fn nk_prime(&self) -> &[u32] {
        &self.nk_prime
    }

    pub fn indices(&self, which: Side) -> &[u32] {
        match which {
            Side::A => &self.nk,
            Side::APrime => &self.nk_prime,
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        let mono = |v: &[u32]| v.windows(2).all(|w| w[0] <= w[1]);
        mono(&self.nk) && mono(&self.nk_prime)
    }

    /// `"17,18;17,18"`: a-indices, then a′-indices.
    pub fn label(&self) -> String {
        let j = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        format!("{};{}", j(&self.nk), j(&self.nk_prime))
    }
}

/// Which of the two Hurwitz parameters a series belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    APrime,
}

impl Side {
    pub fn ray(self, point: &ZetaPoint) -> &RayComplex {
        match self {
            Side::A => point.a(),
            Side::APrime => point.a_prime(),
        }
    }
}

/// ξ = 1 − 1/a and δ = arg ξ.
#[derive(Debug, Clone)]
pub struct GeometryPack {
    pub xi: Complex,
    pub delta: f64,
}

impl GeometryPack {
    pub fn new(a: &RayComplex, ctx: &PrecisionContext) -> Self {
        let prec = ctx.prec();
        let inv = Complex::with_val(prec, a.value(ctx).recip_ref());
        let xi = Complex::with_val(prec, 1 - inv);
        let delta = Float::with_val(prec, xi.arg_ref()).to_f64();
        Self { xi, delta }
    }

    /// Geometry of a = |a|e^(iθ) from f64 data.
    pub fn from_polar(abs_a: f64, theta: f64) -> (f64, f64) {
        let a = num_complex::Complex64::from_polar(abs_a, theta);
        let xi = 1.0 - 1.0 / a;
        let a_prime = 1.0 - a;
        (a_prime.norm(), xi.arg())
    }
}

/// A_r(a) = (−1)^r Γ(2r+s+1)/(2πa)^(2r+s+1).
pub fn a_r_coefficient(r: u32, s: &Complex, a: &RayComplex, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let order = Complex::with_val(prec, s + (2 * r + 1));
    let g = gamma_complex(&order, ctx)?;
    let scaled = a.scale(&Float::with_val(prec, ctx.pi() * 2u32));
    let p = pow_ray(&scaled, &order, ctx)?;
    let v = Complex::with_val(prec, g / p);
    Ok(if r % 2 == 1 { -v } else { v })
}

/// A_0..A_{count−1}, by the recurrence A_{r+1} = −A_r(2r+s+1)(2r+s+2)/(2πa)².
pub fn a_r_sequence(count: usize, s: &Complex, a: &RayComplex, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    let work = ctx.inflated(4);
    let prec = work.prec();
    let first = a_r_coefficient(0, s, a, &work)?;
    let two_pi = Float::with_val(prec, work.pi() * 2u32);
    let w2 = Complex::with_val(prec, a.value_prec(prec) * &two_pi).square();
    let mut cur = first;
    for r in 0..count {
        out.push(Complex::with_val(ctx.prec(), &cur));
        let f1 = Complex::with_val(prec, s + (2 * r as u32 + 1));
        let f2 = Complex::with_val(prec, s + (2 * r as u32 + 2));
        cur = -(cur * f1 * f2 / &w2);
    }
    Ok(out)
}

/// Least-term index: the r ≥ 1 minimising |Γ(2r+s+1)|/(2πk|a|)^(2r+Re s+1),
/// ties going to the smaller index.
///
/// The magnitude ratio of consecutive terms is |(2r+s+1)(2r+s+2)|/(2πk|a|)²,
/// so the minimiser is the first r at which that ratio reaches 1.
pub fn optimal_truncation(k: u32, s: &Complex, a: &RayComplex, ctx: &PrecisionContext) -> Result<u32> {
    if k == 0 {
        return Err(ZetaError::InvalidInput("scale index k starts at 1".into()));
    }
    let prec = ctx.prec();
    let x = Float::with_val(prec, a.modulus() * Float::with_val(prec, ctx.pi() * 2u32)) * k;
    if x < Float::with_val(prec, ctx.pi() * 2u32) {
        return Err(ZetaError::Domain("optimal truncation needs |a| >= 1".into()));
    }
    let x2 = Float::with_val(prec, x.square_ref());
    let limit = 4 * (x.to_f64().ceil() as u32) + 16;
    for r in 1..limit {
        let f1 = Complex::with_val(prec, s + (2 * r + 1));
        let f2 = Complex::with_val(prec, s + (2 * r + 2));
        let m = Float::with_val(prec, Complex::with_val(prec, f1 * f2).abs_ref());
        if m >= x2 {
            return Ok(r);
        }
    }
    Err(ZetaError::NonConvergence("least-term search"))
}

fn two_pi_i_k(k: u32, ctx: &PrecisionContext) -> Complex {
    Complex::with_val(ctx.prec(), (0, Float::with_val(ctx.prec(), ctx.pi() * 2u32) * k))
}

/// e^(2πika) from the value of a.
fn exp_two_pi_i_k(k: u32, a: &RayComplex, ctx: &PrecisionContext) -> Complex {
    let w = Complex::with_val(ctx.prec(), two_pi_i_k(k, ctx) * a.value(ctx));
    w.exp()
}

/// The two terminant arguments ±2πika, carried on arg a ± π/2.
fn remainder_rays(k: u32, a: &RayComplex, ctx: &PrecisionContext) -> (RayComplex, RayComplex) {
    let prec = ctx.prec();
    let half_pi = Float::with_val(prec, ctx.pi() / 2u32);
    let scale = Float::with_val(prec, ctx.pi() * 2u32) * k;
    let base = a.scale(&scale);
    (base.rotate(&half_pi), base.rotate(&Float::with_val(prec, -half_pi)))
}

fn nu_of(n: u32, s: &Complex, ctx: &PrecisionContext) -> Complex {
    Complex::with_val(ctx.prec(), s + 2 * n)
}

/// R_k(a; N) = e^(−iπs){e^(2πika)e^(iπs/2)T_ν(2πika) − e^(−2πika)e^(−iπs/2)T_ν(−2πika)}, ν = 2N + s.
pub fn remainder_rk(k: u32, s: &Complex, a: &RayComplex, nk: u32, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let nu = nu_of(nk, s, ctx);
    let (z_plus, z_minus) = remainder_rays(k, a, ctx);
    let t_plus = terminant(&TerminantQuery::new(nu.clone(), z_plus)?, ctx)?;
    let t_minus = terminant(&TerminantQuery::new(nu, z_minus)?, ctx)?;
    let (h_plus, h_minus) = half_turn_phases(s, ctx);
    let e = exp_two_pi_i_k(k, a, ctx);
    let e_inv = Complex::with_val(prec, e.recip_ref());
    let first = Complex::with_val(prec, &e * &h_plus) * t_plus;
    let second = Complex::with_val(prec, &e_inv * &h_minus) * t_minus;
    let h_minus_sq = Complex::with_val(prec, h_minus.square_ref());
    Ok(Complex::with_val(prec, first - second) * h_minus_sq)
}

/// k^(s−1) for a positive integer k.
fn k_pow_s_minus_1(k: u32, s: &Complex, prec: u32) -> Complex {
    let lnk = Float::with_val(prec, k).ln();
    Complex::with_val(prec, Complex::with_val(prec, s - 1u32) * lnk).exp()
}

/// (2π)^s.
pub fn two_pi_pow_s(s: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let ray = RayComplex::new(Float::with_val(ctx.prec(), ctx.pi() * 2u32), ctx.real(0))?;
    pow_ray(&ray, s, ctx)
}

/// Smallest K whose discarded exponentials Σ_{k>K} k^(Re s−1)e^(−2πk|Im a|) fall
/// below 10^(−digits−2)·|A_0(a)|, the size of the leading algebraic term.
///
/// The terminant factors are O(1) on and beyond the Stokes line, so the
/// exponential alone sets the scale.
pub fn required_k_max(s: &Complex, a: &RayComplex, ctx: &PrecisionContext) -> Result<usize> {
    let im = (a.modulus().to_f64() * a.argument().to_f64().sin()).abs();
    if im <= 0.0 {
        return Err(ZetaError::Domain("the k-series needs Im a != 0".into()));
    }
    let a0 = abs_f64(&a_r_coefficient(0, s, a, ctx)?).max(f64::MIN_POSITIVE);
    let target = a0.ln() - (ctx.digits() as f64 + 2.0) * std::f64::consts::LN_10;
    let sigma = s.real().to_f64();
    let log_tail = |kk: usize| -> f64 {
        // first discarded term, doubled for the geometric remainder
        let k1 = (kk + 1) as f64;
        (sigma - 1.0).max(0.0) * k1.ln() - 2.0 * std::f64::consts::PI * k1 * im + 2f64.ln()
    };
    let mut kk = 1usize;
    while log_tail(kk) > target {
        kk += 1;
        if kk > 100_000 {
            return Err(ZetaError::NonConvergence("k_max search"));
        }
    }
    Ok(kk)
}

/// (1/π)Σ_{r=from}^{M−1} A_r ζ(2r+2, K+1), with M the first index whose term
/// is below 10^(−digits−2)·|A_0|.
fn algebraic_tail(s: &Complex, a: &RayComplex, k_max: usize, from: u32, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let base = k_max as u32 + 1;
    let a0 = abs_f64(&a_r_coefficient(0, s, a, ctx)?);
    let cutoff = a0 * 10f64.powi(-(ctx.digits() as i32) - 2);
    // Cap at the least term of the (K+1)-scale; beyond it terms grow.
    let cap = optimal_truncation(base, s, a, ctx)?;
    let count = cap.max(from) as usize + 1;
    let seq = a_r_sequence(count, s, a, ctx)?;
    let mut sum = Complex::with_val(prec, 0);
    let mut r = from;
    loop {
        let z = hurwitz_zeta_integer(2 * r + 2, base, ctx)?;
        let term = Complex::with_val(prec, &seq[r as usize] * z);
        let small = abs_f64(&term) < cutoff;
        if small {
            break;
        }
        sum += term;
        r += 1;
        if r >= cap {
            return Err(ZetaError::TailBound {
                bound: abs_f64(&seq[cap as usize]) / a0,
                required_k_max: k_max + 1,
            });
        }
    }
    Ok(Complex::with_val(prec, sum / ctx.pi()))
}

/// (1/π)Σ_{k≥1}Σ_{r<N_k} A_r/k^(2r+2) with N_k = N_K beyond the plan,
/// summed directly over k ≤ K.
pub fn algebraic_series(s: &Complex, a: &RayComplex, nk: &[u32], ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec();
    let k_max = nk.len();
    let n_max = *nk.iter().max().unwrap_or(&0) as usize;
    let seq = a_r_sequence(n_max, s, a, ctx)?;
    let mut sum = Complex::with_val(prec, 0);
    for (i, &n) in nk.iter().enumerate() {
        let k = Float::with_val(prec, (i + 1) as u32);
        let k2 = Float::with_val(prec, k.square_ref());
        let mut kpow = Float::with_val(prec, &k2); // k^(2r+2)
        for ar in seq.iter().take(n as usize) {
            sum += Complex::with_val(prec, ar / &kpow);
            kpow *= &k2;
        }
    }
    let last = *nk.last().expect("nonempty plan");
    let base = k_max as u32 + 1;
    for (r, ar) in seq.iter().take(last as usize).enumerate() {
        let z = hurwitz_zeta_integer(2 * r as u32 + 2, base, ctx)?;
        sum += Complex::with_val(prec, ar * z);
    }
    Ok(Complex::with_val(prec, sum / ctx.pi()))
}

/// Σ_{k≤K} k^(s−1)R_k(a;N_k) plus the continuation of the algebraic series
/// past N_K on the scales k > K.
///
/// Both exact forms share this routine; only their algebraic parts differ.
pub fn remainder_series(s: &Complex, a: &RayComplex, nk: &[u32], ctx: &PrecisionContext) -> Result<Complex> {
    check_k_max(s, a, nk.len(), ctx)?;
    let prec = ctx.prec();
    let terms: Vec<Result<Complex>> = nk
        .par_iter()
        .enumerate()
        .map(|(i, &n)| {
            let k = i as u32 + 1;
            let r = remainder_rk(k, s, a, n, ctx)?;
            Ok(Complex::with_val(prec, k_pow_s_minus_1(k, s, prec) * r))
        })
        .collect();
    let mut sum = Complex::with_val(prec, 0);
    for t in terms {
        sum += t?;
    }
    let last = *nk.last().expect("nonempty plan");
    sum += algebraic_tail(s, a, nk.len(), last, ctx)?;
    Ok(sum)
}

fn check_k_max(s: &Complex, a: &RayComplex, k_max: usize, ctx: &PrecisionContext) -> Result<()> {
    let need = required_k_max(s, a, ctx)?;
    if k_max < need {
        let im = (a.modulus().to_f64() * a.argument().to_f64().sin()).abs();
        return Err(ZetaError::TailBound {
            bound: (-2.0 * std::f64::consts::PI * (k_max as f64 + 1.0) * im).exp(),
            required_k_max: need,
        });
    }
    Ok(())
}

fn check_s(s: &Complex, ctx: &PrecisionContext) -> Result<()> {
    let re = s.real().to_f64();
    let im = s.imag().to_f64();
    if re <= 0.5 && im.abs() < ctx.tol_f64() && (re - re.round()).abs() < ctx.tol_f64() && re.round() <= -1.0 {
        return Err(ZetaError::Domain(format!("s = {re} is a negative integer")));
    }
    Ok(())
}

/// Z(s,a) from the exponentially improved expansion with the a-indices of `plan`.
pub fn z_improved(s: &Complex, a: &RayComplex, plan: &TruncationPlan, ctx: &PrecisionContext) -> Result<Complex> {
    check_s(s, ctx)?;
    let nk = plan.nk();
    let rem = remainder_series(s, a, nk, ctx)?;
    let alg = algebraic_series(s, a, nk, ctx)?;
    let pref = two_pi_pow_s(s, ctx)?;
    Ok(Complex::with_val(ctx.prec(), pref * (alg + rem)))
}

/// Σ_{r<N} B_{2r+2}Γ(2r+s+1)/((2r+2)!·a^(2r+s+1)).
pub fn poincare_partial_sum(s: &Complex, a: &RayComplex, n: u32, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.prec() + 32;
    let work = ctx.inflated(10);
    let mut g = gamma_complex(&Complex::with_val(prec, s + 1u32), &work)?; // Γ(2r+s+1)
    let order = Complex::with_val(prec, s + 1u32);
    let mut apow = pow_ray(a, &order, &work)?; // a^(2r+s+1)
    let a2 = Complex::with_val(prec, a.value_prec(prec).square_ref());
    let mut sum = Complex::with_val(prec, 0);
    let mut fact = Integer::from(2); // (2r+2)!
    for r in 0..n {
        let b = bernoulli_even(r as usize + 1)?;
        let coeff = Float::with_val(prec, &b) / Float::with_val(prec, &fact);
        sum += Complex::with_val(prec, &g * coeff) / &apow;
        let m = 2 * r + 1;
        g *= Complex::with_val(prec, s + m);
        g *= Complex::with_val(prec, s + (m + 1));
        apow *= &a2;
        fact *= (2 * r + 3) * (2 * r + 4);
    }
    Ok(Complex::with_val(ctx.prec(), sum))
}

/// Z(s,a) with one truncation index N on every scale: the Bernoulli-number
/// partial sum plus (2π)^s times the shared remainder series.
pub fn z_equal_truncation(
    s: &Complex,
    a: &RayComplex,
    n: u32,
    k_max: usize,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    check_s(s, ctx)?;
    let plan = TruncationPlan::constant(n, k_max)?;
    let rem = remainder_series(s, a, plan.nk(), ctx)?;
    let pref = two_pi_pow_s(s, ctx)?;
    let head = poincare_partial_sum(s, a, n, ctx)?;
    Ok(Complex::with_val(ctx.prec(), head + pref * rem))
}

/// ℛ_k = e^(iπs/2)R_k(a;N_k) + e^(−iπs/2)R_k(a′;N′_k).
pub fn script_r_k(k: u32, point: &ZetaPoint, nk: u32, nk_prime: u32, ctx: &PrecisionContext) -> Result<Complex> {
    let s = point.s();
    let (h_plus, h_minus) = half_turn_phases(s, ctx);
    let ra = remainder_rk(k, s, point.a(), nk, ctx)?;
    let rap = remainder_rk(k, s, point.a_prime(), nk_prime, ctx)?;
    Ok(Complex::with_val(ctx.prec(), h_plus * ra) + h_minus * rap)
}

/// Alternative written forms of ℛ_k, kept for validation against [`script_r_k`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemainderForm {
    /// Four terminants, phases as obtained by expanding the definition.
    Expanded,
    /// Four terminants with e^(2πika−iπs) on the second term.
    ExpandedAlternateSign,
    /// After one connection step on the last terminant.
    Connected,
    /// Connected form with the second group negated.
    ConnectedAlternateSign,
}

impl RemainderForm {
    pub const ALL: [RemainderForm; 4] = [
        RemainderForm::Expanded,
        RemainderForm::ExpandedAlternateSign,
        RemainderForm::Connected,
        RemainderForm::ConnectedAlternateSign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RemainderForm::Expanded => "expanded",
            RemainderForm::ExpandedAlternateSign => "expanded-alternate-sign",
            RemainderForm::Connected => "connected",
            RemainderForm::ConnectedAlternateSign => "connected-alternate-sign",
        }
    }
}

/// ℛ_k evaluated from one of its rewritten forms.
pub fn script_r_k_form(
    form: RemainderForm,
    k: u32,
    point: &ZetaPoint,
    nk: u32,
    nk_prime: u32,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let prec = ctx.prec();
    let s = point.s();
    let nu = nu_of(nk, s, ctx);
    let nu_p = nu_of(nk_prime, s, ctx);
    let (za_plus, za_minus) = remainder_rays(k, point.a(), ctx);
    let (zp_plus, zp_minus) = remainder_rays(k, point.a_prime(), ctx);
    let t1 = terminant(&TerminantQuery::new(nu.clone(), za_plus)?, ctx)?;
    let t2 = terminant(&TerminantQuery::new(nu, za_minus)?, ctx)?;
    let t3 = terminant(&TerminantQuery::new(nu_p.clone(), zp_plus)?, ctx)?;
    let e = exp_two_pi_i_k(k, point.a(), ctx);
    let e_inv = Complex::with_val(prec, e.recip_ref());
    let (h_plus, h_minus) = half_turn_phases(s, ctx);
    let ips = Complex::with_val(prec, h_minus.square_ref()); // e^(−iπs)
    let ips2 = Complex::with_val(prec, ips.square_ref()); // e^(−2πis)
    let e_inv_ips = Complex::with_val(prec, &e_inv * &ips);
    match form {
        RemainderForm::Expanded | RemainderForm::ExpandedAlternateSign => {
            let t4 = terminant(&TerminantQuery::new(nu_p, zp_minus)?, ctx)?;
            let second_phase = if form == RemainderForm::Expanded {
                e_inv_ips.clone()
            } else {
                Complex::with_val(prec, &e * &ips)
            };
            let mut v = Complex::with_val(prec, &e * &t1);
            v -= second_phase * &t2;
            v += Complex::with_val(prec, &e_inv_ips * &t3);
            v -= Complex::with_val(prec, &e * &ips2) * t4;
            let _ = h_plus;
            Ok(v)
        }
        RemainderForm::Connected | RemainderForm::ConnectedAlternateSign => {
            // −2πika′ sits near −π; one connection step carries it to 2πikaξ near +π.
            let q4 = TerminantQuery::new(nu_p, zp_minus)?;
            let up = connect_up(&q4, ctx);
            let t_xi = terminant(&up.query, ctx)?;
            let first = Complex::with_val(prec, Complex::with_val(prec, &t1 - &t_xi) + 1u32) * &e;
            let group = if form == RemainderForm::Connected {
                Complex::with_val(prec, &t3 - &t2)
            } else {
                Complex::with_val(prec, &t2 - &t3)
            };
            Ok(first + e_inv_ips * group)
        }
    }
}

/// (1/π)Σ_{m=1}^{K} Σ_{r=N_{m−1}}^{N_m−1} A_r ζ(2r+2, m), N_0 = 0.
pub fn rearranged_double_sum(
    point: &ZetaPoint,
    plan: &TruncationPlan,
    ctx: &PrecisionContext,
    which: Side,
) -> Result<Complex> {
    let nk = plan.indices(which);
    if !nk.windows(2).all(|w| w[0] <= w[1]) {
        return Err(ZetaError::NonMonotonePlan(nk.to_vec()));
    }
    let prec = ctx.prec();
    let a = which.ray(point);
    let n_max = *nk.last().expect("nonempty") as usize;
    let seq = a_r_sequence(n_max, point.s(), a, ctx)?;
    let mut sum = Complex::with_val(prec, 0);
    let mut prev = 0u32;
    for (i, &n) in nk.iter().enumerate() {
        let m = i as u32 + 1;
        for r in prev..n {
            let z = hurwitz_zeta_integer(2 * r + 2, m, ctx)?;
            sum += Complex::with_val(prec, &seq[r as usize] * z);
        }
        prev = n;
    }
    Ok(Complex::with_val(prec, sum / ctx.pi()))
}

/// Number of (k, r) pairs per block of the rearrangement; block m holds
/// N_m − N_{m−1} values of r.
pub fn block_sizes(nk: &[u32]) -> Vec<u32> {
    let mut prev = 0;
    nk.iter()
        .map(|&n| {
            let d = n - prev;
            prev = n;
            d
        })
        .collect()
}

/// F̃(a,s) reconstructed from both improved expansions.
pub fn f_tilde_improved(point: &ZetaPoint, plan: &TruncationPlan, ctx: &PrecisionContext) -> Result<Complex> {
    let s = point.s();
    let (h_plus, h_minus) = half_turn_phases(s, ctx);
    let mut parts = [Side::A, Side::APrime].into_iter().map(|side| {
        let a = side.ray(point);
        let nk = plan.indices(side);
        let alg = algebraic_series(s, a, nk, ctx)?;
        let rem = remainder_series(s, a, nk, ctx)?;
        Ok::<_, ZetaError>(Complex::with_val(ctx.prec(), alg + rem))
    });
    let za = parts.next().expect("two sides")?;
    let zp = parts.next().expect("two sides")?;
    Ok(Complex::with_val(ctx.prec(), h_plus * za) + h_minus * zp)
}

/// Default K for a point: the tail requirement for a (and a′, which has the
/// same |Im|), and at least `min_k`.
pub fn default_k_max(point: &ZetaPoint, min_k: usize, ctx: &PrecisionContext) -> Result<usize> {
    let ka = required_k_max(point.s(), point.a(), ctx)?;
    let kp = required_k_max(point.s(), point.a_prime(), ctx)?;
    Ok(ka.max(kp).max(min_k))
}

/// Ratio |A_{r+1}/A_r| predicted by the Γ recurrence for real s and |a|.
pub fn a_r_ratio(r: u32, s: f64, abs_a: f64) -> f64 {
    let x = 2.0 * std::f64::consts::PI * abs_a;
    (2.0 * r as f64 + s + 1.0) * (2.0 * r as f64 + s + 2.0) / (x * x)
}
