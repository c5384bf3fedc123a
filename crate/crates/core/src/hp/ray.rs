use rug::{Complex, Float};

use super::context::PrecisionContext;
use crate::error::{Result, ZetaError};

/// A complex number stored in polar form with an unreduced argument.
///
/// The argument is data: `(1, 0)` and `(1, 2π)` have the same value but
/// produce different powers and logarithms. Every branch-sensitive power
/// in the crate goes through [`pow_ray`].
#[derive(Debug, Clone, PartialEq)]
pub struct RayComplex {
    modulus: Float,
    argument: Float,
}

impl RayComplex {
    pub fn new(modulus: Float, argument: Float) -> Result<Self> {
        if modulus.is_sign_negative() && !modulus.is_zero() || modulus.is_nan() {
            return Err(ZetaError::InvalidInput(format!(
                "ray modulus must be >= 0, got {}",
                modulus.to_f64()
            )));
        }
        if !argument.is_finite() {
            return Err(ZetaError::InvalidInput("ray argument must be finite".into()));
        }
        Ok(Self { modulus, argument })
    }

    /// Polar ray `modulus·e^(i·turns·π)`.
    pub fn from_turns(modulus: f64, turns_of_pi: f64, ctx: &PrecisionContext) -> Result<Self> {
        let arg = ctx.pi() * Float::with_val(ctx.prec(), turns_of_pi);
        Self::new(ctx.real(modulus), arg)
    }

    /// Ray carrying the principal argument of `z`, in (−π, π].
    pub fn principal(z: &Complex) -> Self {
        let prec = z.prec().0.max(z.prec().1);
        let modulus = Float::with_val(prec, z.abs_ref());
        let argument = Float::with_val(prec, z.arg_ref());
        Self { modulus, argument }
    }

    pub fn modulus(&self) -> &Float {
        &self.modulus
    }

    pub fn argument(&self) -> &Float {
        &self.argument
    }

    /// `modulus·e^(i·argument)` at precision `prec`.
    pub fn value_prec(&self, prec: u32) -> Complex {
        let (s, c) = Float::with_val(prec, &self.argument).sin_cos(Float::new(prec));
        let m = Float::with_val(prec, &self.modulus);
        Complex::with_val(prec, (Float::with_val(prec, &m * &c), m * s))
    }

    pub fn value(&self, ctx: &PrecisionContext) -> Complex {
        self.value_prec(ctx.prec())
    }

    /// Adds `phi` to the argument without reduction.
    pub fn rotate(&self, phi: &Float) -> Self {
        Self {
            modulus: self.modulus.clone(),
            argument: Float::with_val(self.argument.prec().max(phi.prec()), &self.argument + phi),
        }
    }

    /// Multiplies the modulus by a positive real factor.
    pub fn scale(&self, factor: &Float) -> Self {
        Self {
            modulus: Float::with_val(self.modulus.prec().max(factor.prec()), &self.modulus * factor),
            argument: self.argument.clone(),
        }
    }

    /// `ln(modulus) + i·argument` on the carried branch.
    pub fn ln_prec(&self, prec: u32) -> Result<Complex> {
        if self.modulus.is_zero() {
            return Err(ZetaError::Domain("logarithm of a zero-modulus ray".into()));
        }
        let lr = Float::with_val(prec, self.modulus.ln_ref());
        Ok(Complex::with_val(prec, (lr, &self.argument)))
    }

    pub fn set_prec(&mut self, prec: u32) {
        self.modulus.set_prec(prec);
        self.argument.set_prec(prec);
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let mut r = self.clone();
        r.set_prec(prec);
        r
    }
}

/// `base^exponent = exp(exponent·(ln|base| + i·arg base))` using the carried argument.
pub fn pow_ray(base: &RayComplex, exponent: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    pow_ray_prec(base, exponent, ctx.prec())
}

pub(crate) fn pow_ray_prec(base: &RayComplex, exponent: &Complex, prec: u32) -> Result<Complex> {
    if base.modulus().is_zero() {
        return Err(ZetaError::Domain("power of a zero-modulus ray".into()));
    }
    // ln|base| can be large; carry a few extra bits through the exponential.
    let extra = 16 + exponent_bits(base, exponent);
    let p = prec + extra;
    let ln = base.ln_prec(p)?;
    let e = Complex::with_val(p, exponent);
    let mut w = Complex::with_val(p, e * ln);
    w = w.exp();
    Ok(Complex::with_val(prec, w))
}

fn exponent_bits(base: &RayComplex, exponent: &Complex) -> u32 {
    let m = base.modulus().to_f64().abs().ln().abs() + base.argument().to_f64().abs();
    let e = exponent.real().to_f64().abs() + exponent.imag().to_f64().abs();
    let mag = (m * e).max(1.0);
    mag.log2().ceil().max(0.0) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn full_turn_changes_half_power() {
        let c = ctx();
        let base = RayComplex::new(c.real(1), c.pi() * 2u32).unwrap();
        let r = pow_ray(&base, &c.complex(0.5), &c).unwrap();
        assert!((Float::with_val(c.prec(), r.real() + 1u32)).abs() < c.tol());
        assert!(r.imag().clone().abs() < c.tol());

        let principal = RayComplex::new(c.real(1), c.real(0)).unwrap();
        assert_eq!(
            base.value(&c).real().to_f64().round(),
            principal.value(&c).real().to_f64()
        );
        assert_ne!(base, principal);
    }

    #[test]
    fn e_to_i_pi() {
        let c = ctx();
        let e = Float::with_val(c.prec(), 1).exp();
        let base = RayComplex::new(e, c.real(0)).unwrap();
        let ipi = Complex::with_val(c.prec(), (0, c.pi()));
        let r = pow_ray(&base, &ipi, &c).unwrap();
        let err = Float::with_val(c.prec(), Complex::with_val(c.prec(), &r + 1u32).abs_ref());
        assert!(err < c.tol());
    }

    #[test]
    fn zero_modulus_rejected() {
        let c = ctx();
        let base = RayComplex::new(c.real(0), c.real(0)).unwrap();
        assert!(pow_ray(&base, &c.complex(2), &c).is_err());
        assert!(RayComplex::new(c.real(-1), c.real(0)).is_err());
    }

    #[test]
    fn rotate_adds_exactly() {
        let c = ctx();
        let r = RayComplex::from_turns(3.0, 0.25, &c).unwrap();
        let r2 = r.rotate(&(c.pi() * 2u32));
        let diff = Float::with_val(c.prec(), r2.argument() - r.argument()) - c.pi() * 2u32;
        assert!(diff.abs() < c.eps());
        let v1 = r.value(&c);
        let v2 = r2.value(&c);
        let d = Float::with_val(c.prec(), Complex::with_val(c.prec(), &v1 - &v2).abs_ref());
        assert!(d < c.tol());
    }
}
