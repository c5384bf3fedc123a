use rug::ops::Pow;
use rug::{Complex, Float};

use super::bernoulli::bernoulli_even;
use super::context::{bits_for_digits, PrecisionContext};
use crate::error::{Result, ZetaError};

/// Γ(z) for complex `z` to `ctx.digits` relative accuracy.
///
/// Shifts upward with `Γ(z) = Γ(z+m) / (z(z+1)…(z+m-1))` until
/// `Re(z+m) >= 0.9·working_digits`, then sums the Stirling series for
/// `ln Γ` until its terms fall below the working resolution. At that
/// shift the least Stirling term is about `exp(-2π|z+m|)`, far below it.
pub fn gamma_complex(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    check_pole(z, ctx)?;
    let wd = ctx.working_digits();
    let threshold = 0.9 * wd as f64;

    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    let shift = if re < threshold {
        (threshold - re).ceil() as u32
    } else {
        0
    };

    // ln Γ can reach thousands for the orders used by terminants; carry its
    // integer part on top of the working digits.
    let mag = (re.abs() + im.abs() + shift as f64 + 2.0).ln() * (re.abs() + im.abs() + shift as f64 + 2.0);
    let extra = (mag.max(1.0).log10().ceil() as u32) + 4;
    let prec = bits_for_digits(wd + extra);

    let mut w = Complex::with_val(prec, z);
    let mut denom = Complex::with_val(prec, 1);
    for _ in 0..shift {
        denom *= &w;
        w += 1u32;
    }

    let lg = stirling_ln_gamma(&w, prec, wd + extra)?;
    let g = Complex::with_val(prec, lg.exp_ref()) / denom;
    Ok(Complex::with_val(ctx.prec(), g))
}

fn check_pole(z: &Complex, ctx: &PrecisionContext) -> Result<()> {
    let re = z.real();
    if *re > 0.5 {
        return Ok(());
    }
    let nearest = Float::with_val(ctx.prec(), re.round_ref());
    let dre = Float::with_val(ctx.prec(), re - &nearest);
    let d = Float::with_val(ctx.prec(), dre.hypot_ref(z.imag()));
    if d < ctx.tol() {
        return Err(ZetaError::Pole {
            function: "gamma",
            distance: d.to_f64(),
        });
    }
    Ok(())
}

/// Stirling series for `ln Γ(w)`, `Re w` large.
fn stirling_ln_gamma(w: &Complex, prec: u32, digits: u32) -> Result<Complex> {
    let eps = Float::with_val(prec, 10).pow(-(digits as i32));
    let ln_w = Complex::with_val(prec, w.ln_ref());
    let half = Float::with_val(prec, 0.5);
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let mut acc = Complex::with_val(prec, w - &half) * &ln_w;
    acc -= w;
    acc += Float::with_val(prec, two_pi.ln_ref()) * half;

    let w2 = Complex::with_val(prec, w.square_ref());
    let mut wpow = Complex::with_val(prec, w); // w^(2k-1)
    let mut prev_mag = f64::INFINITY;
    for k in 1..=4 * digits as usize + 50 {
        let b = bernoulli_even(k)?;
        let coeff = Float::with_val(prec, &b) / ((2 * k as u64) * (2 * k as u64 - 1));
        let term = Complex::with_val(prec, &coeff / &wpow);
        let mag = Float::with_val(prec, term.abs_ref());
        acc += &term;
        if mag < eps {
            return Ok(acc);
        }
        let m = mag.to_f64();
        if m > prev_mag {
            return Err(ZetaError::NonConvergence("Stirling series"));
        }
        prev_mag = m;
        wpow *= &w2;
    }
    Err(ZetaError::NonConvergence("Stirling series"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: &Complex, b: &Complex) -> f64 {
        let p = a.prec().0;
        let d = Float::with_val(p, Complex::with_val(p, a - b).abs_ref());
        let m = Float::with_val(p, b.abs_ref());
        (d / m).to_f64()
    }

    #[test]
    fn factorial_and_half() {
        let ctx = PrecisionContext::default();
        let g5 = gamma_complex(&ctx.complex(5), &ctx).unwrap();
        assert!(rel_err(&g5, &ctx.complex(24)) < 1e-55);
        let gh = gamma_complex(&ctx.complex(0.5), &ctx).unwrap();
        let sqrt_pi = ctx.complex(ctx.pi().sqrt());
        assert!(rel_err(&gh, &sqrt_pi) < 1e-55);
    }

    #[test]
    fn reflection_identity_off_axis() {
        let ctx = PrecisionContext::default();
        let z = ctx.complex((2.0, 0.5));
        let g1 = gamma_complex(&z, &ctx).unwrap();
        let one_minus = Complex::with_val(ctx.prec(), 1 - &z);
        let g2 = gamma_complex(&one_minus, &ctx).unwrap();
        let lhs = Complex::with_val(ctx.prec(), &g1 * &g2);
        let piz = Complex::with_val(ctx.prec(), &z * ctx.pi());
        let rhs = Complex::with_val(ctx.prec(), ctx.pi() / piz.sin());
        assert!(rel_err(&lhs, &rhs) < ctx.tol().to_f64());
    }

    #[test]
    fn large_and_negative_orders() {
        let ctx = PrecisionContext::default();
        // Γ(101) = 100!
        let g = gamma_complex(&ctx.complex(101), &ctx).unwrap();
        let f = ctx.complex(rug::Complete::complete(rug::Integer::factorial(100)));
        assert!(rel_err(&g, &f) < 1e-55);
        // Γ(-3.5) = 16√π/105
        let g = gamma_complex(&ctx.complex(-3.5), &ctx).unwrap();
        let expected = ctx.complex(ctx.pi().sqrt() * 16u32 / 105u32);
        assert!(rel_err(&g, &expected) < 1e-55);
    }

    #[test]
    fn poles_rejected_with_distance() {
        let ctx = PrecisionContext::default();
        for n in [0, -1, -7] {
            match gamma_complex(&ctx.complex(n), &ctx) {
                Err(ZetaError::Pole { distance, .. }) => assert_eq!(distance, 0.0),
                other => panic!("expected pole, got {other:?}"),
            }
        }
        assert!(gamma_complex(&ctx.complex(-7.01), &ctx).is_ok());
    }
}
