use rug::ops::Pow;
use rug::{Complex, Float};

use super::context::{bits_for_digits, PrecisionContext};

/// Error function.
///
/// Real arguments go through MPFR at working precision. Complex arguments
/// use the Maclaurin series with the working precision raised by
/// `|z|²/ln 10` digits to absorb the growth of the partial sums; this path
/// only feeds leading-order approximations and is trusted to 15 digits.
pub fn erf_hp(z: &Complex, ctx: &PrecisionContext) -> Complex {
    if z.imag().is_zero() {
        let x = Float::with_val(ctx.prec(), z.real());
        return Complex::with_val(ctx.prec(), x.erf());
    }
    erf_series(z, ctx)
}

fn erf_series(z: &Complex, ctx: &PrecisionContext) -> Complex {
    let r2 = Float::with_val(53, z.abs_ref()).to_f64().powi(2);
    let extra = (r2 / std::f64::consts::LN_10).ceil() as u32 + 5;
    let digits = ctx.working_digits() + extra;
    let prec = bits_for_digits(digits);
    let eps = Float::with_val(prec, 10).pow(-(ctx.working_digits() as i32));

    let z = Complex::with_val(prec, z);
    let minus_z2 = -Complex::with_val(prec, z.square_ref());
    // z^(2n+1)(-1)^n / n!
    let mut power = z.clone();
    let mut sum = Complex::with_val(prec, 0);
    let mut n: u64 = 0;
    loop {
        let term = Complex::with_val(prec, &power / (2 * n + 1));
        sum += &term;
        if n as f64 > r2 {
            let t = Float::with_val(prec, term.abs_ref());
            let s = Float::with_val(prec, sum.abs_ref());
            if t <= Float::with_val(prec, &s * &eps) {
                break;
            }
        }
        n += 1;
        power *= &minus_z2;
        power /= n;
    }
    let two_over_sqrt_pi = Float::with_val(prec, 2) / Float::with_val(prec, rug::float::Constant::Pi).sqrt();
    Complex::with_val(ctx.prec(), sum * two_over_sqrt_pi)
}

/// Double-precision erf for the leading-order multiplier formulas.
pub fn erf_f64(x: f64) -> f64 {
    Float::with_val(64, x).erf().to_f64()
}
