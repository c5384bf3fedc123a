use rug::ops::Pow;
use rug::{Complete, Float, Integer};

use super::bernoulli::bernoulli_even;
use super::context::{bits_for_digits, PrecisionContext};
use crate::error::{Result, ZetaError};

/// ζ(m) for even `m >= 2` from `B_m = 2(-1)^(m/2-1) ζ(m) m! / (2π)^m`.
pub fn zeta_even(m: u32, ctx: &PrecisionContext) -> Result<Float> {
    zeta_even_prec(m, ctx.prec())
}

fn zeta_even_prec(m: u32, prec: u32) -> Result<Float> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(ZetaError::InvalidInput(format!(
            "zeta_even needs an even integer >= 2, got {m}"
        )));
    }
    let b = bernoulli_even((m / 2) as usize)?;
    let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u32;
    let num = Float::with_val(prec, &b).abs() * two_pi.pow(m);
    let den = Float::with_val(prec, Integer::factorial(m).complete()) * 2u32;
    Ok(num / den)
}

/// ζ(m, base) = ζ(m) − Σ_{j<base} j^(−m) for even `m` and integer `base >= 1`.
///
/// For `base >= 2` the result is about `base^(−m)` while ζ(m) ≈ 1, so the
/// subtraction runs with `m·log10(base)` additional digits.
pub fn hurwitz_zeta_integer(m: u32, base: u32, ctx: &PrecisionContext) -> Result<Float> {
    if base == 0 {
        return Err(ZetaError::InvalidInput("hurwitz_zeta_integer needs base >= 1".into()));
    }
    if base == 1 {
        return zeta_even(m, ctx);
    }
    let lost = (m as f64 * (base as f64).log10()).ceil() as u32 + 2;
    let prec = bits_for_digits(ctx.working_digits() + lost);
    let mut acc = zeta_even_prec(m, prec)?;
    for j in 1..base {
        let p = Float::with_val(prec, j).pow(m);
        acc -= p.recip();
    }
    Ok(Float::with_val(ctx.prec(), acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values() {
        let ctx = PrecisionContext::default();
        let pi = ctx.pi();
        let z2 = zeta_even(2, &ctx).unwrap();
        let e2 = Float::with_val(ctx.prec(), pi.square_ref()) / 6u32;
        assert!(Float::with_val(ctx.prec(), &z2 - &e2).abs() < ctx.eps() * 10u32);
        let z4 = zeta_even(4, &ctx).unwrap();
        let e4 = Float::with_val(ctx.prec(), (&pi).pow(4u32)) / 90u32;
        assert!(Float::with_val(ctx.prec(), &z4 - &e4).abs() < ctx.eps() * 10u32);
    }

    #[test]
    fn rejects_odd_and_small() {
        let ctx = PrecisionContext::default();
        assert!(zeta_even(3, &ctx).is_err());
        assert!(zeta_even(0, &ctx).is_err());
        assert!(hurwitz_zeta_integer(4, 0, &ctx).is_err());
    }

    #[test]
    fn base_one_is_zeta() {
        let ctx = PrecisionContext::default();
        for m in (2..=40).step_by(2) {
            assert_eq!(hurwitz_zeta_integer(m, 1, &ctx).unwrap(), zeta_even(m, &ctx).unwrap());
        }
    }

    #[test]
    fn base_two_shift() {
        let ctx = PrecisionContext::default();
        let h = hurwitz_zeta_integer(2, 2, &ctx).unwrap();
        let e = zeta_even(2, &ctx).unwrap() - 1u32;
        assert!(Float::with_val(ctx.prec(), &h - &e).abs() < ctx.eps() * 10u32);
    }

    #[test]
    fn large_order_keeps_relative_accuracy() {
        // ζ(120, 5) = 5^-120 (1 + (5/6)^120 + ...); relative accuracy must survive.
        let ctx = PrecisionContext::default();
        let h = hurwitz_zeta_integer(120, 5, &ctx).unwrap();
        let p = ctx.prec() + 64;
        let mut direct = Float::with_val(p, 0);
        for j in 0..400u32 {
            direct += Float::with_val(p, j + 5).pow(120u32).recip();
        }
        let rel = Float::with_val(p, &h - &direct).abs() / &direct;
        assert!(rel < ctx.tol(), "rel = {}", rel.to_f64());
    }
}
