use rug::ops::Pow;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Number of bits needed to carry `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * BITS_PER_DIGIT).ceil() as u32 + 8
}

/// Working precision shared by every computation.
///
/// `digits` is the number of decimal digits the caller wants to trust;
/// `guard` extra digits are carried internally. Operations that suffer
/// known cancellation derive an [`inflated`](Self::inflated) context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            digits: Self::DEFAULT_DIGITS,
            guard: Self::DEFAULT_GUARD,
        }
    }
}

impl PrecisionContext {
    pub const DEFAULT_DIGITS: u32 = 60;
    pub const DEFAULT_GUARD: u32 = 20;
    pub const MIN_DIGITS: u32 = 30;
    pub const MIN_GUARD: u32 = 10;
    pub const DIGITS_ENV: &'static str = "ZETA_DIGITS";

    pub fn new(digits: u32, guard: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(ZetaError::InvalidInput(format!(
                "digits must be >= {}, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        if guard < Self::MIN_GUARD {
            return Err(ZetaError::InvalidInput(format!(
                "guard must be >= {}, got {guard}",
                Self::MIN_GUARD
            )));
        }
        Ok(Self { digits, guard })
    }

    pub fn with_digits(digits: u32) -> Result<Self> {
        Self::new(digits, Self::DEFAULT_GUARD)
    }

    /// Default context, honouring `ZETA_DIGITS` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::DIGITS_ENV) {
            Ok(v) => {
                let d = v
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| ZetaError::Config(format!("{}={v:?} is not an integer", Self::DIGITS_ENV)))?;
                Self::with_digits(d)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    /// Binary precision of the working digits.
    pub fn prec(&self) -> u32 {
        bits_for_digits(self.working_digits())
    }

    /// Comparison tolerance `10^(-digits+10)`.
    pub fn tol(&self) -> Float {
        Float::with_val(self.prec(), 10).pow(-(self.digits as i32) + 10)
    }

    pub fn tol_f64(&self) -> f64 {
        10f64.powi(-(self.digits as i32) + 10)
    }

    /// `10^(-working_digits)`: the resolution of internal sums.
    pub fn eps(&self) -> Float {
        Float::with_val(self.prec(), 10).pow(-(self.working_digits() as i32))
    }

    /// Same target digits, `extra` more guard digits.
    pub fn inflated(&self, extra: u32) -> Self {
        Self {
            digits: self.digits,
            guard: self.guard + extra,
        }
    }

    /// Context with `extra` more target digits (used by precision-stability checks).
    pub fn refined(&self, extra: u32) -> Self {
        Self {
            digits: self.digits + extra,
            guard: self.guard,
        }
    }

    pub fn real<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.prec(), v)
    }

    pub fn complex<T>(&self, v: T) -> Complex
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.prec(), v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.prec(), rug::float::Constant::Pi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_digits_and_guard() {
        assert!(PrecisionContext::new(29, 20).is_err());
        assert!(PrecisionContext::new(30, 9).is_err());
        assert!(PrecisionContext::new(30, 10).is_ok());
    }

    #[test]
    fn tol_is_positive_and_monotone() {
        let mut last = f64::INFINITY;
        for d in [30, 45, 60, 90, 120] {
            let ctx = PrecisionContext::with_digits(d).unwrap();
            let t = ctx.tol();
            assert!(t > 0);
            assert!(t.to_f64() < last);
            last = t.to_f64();
        }
        let ctx = PrecisionContext::default();
        assert_eq!(ctx.digits(), 60);
        assert!((ctx.tol().to_f64() / 1e-50 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inflation_keeps_target_digits() {
        let ctx = PrecisionContext::default().inflated(40);
        assert_eq!(ctx.digits(), 60);
        assert_eq!(ctx.working_digits(), 120);
        assert!(ctx.prec() > PrecisionContext::default().prec());
    }
}
