//! Arbitrary-precision foundation: precision context, branch-tracked
//! complex rays, and the special functions the expansions are built from.
//!
//! `HpComplex` is MPFR/MPC-backed (`rug`); every value carries its own
//! binary precision, normally `PrecisionContext::prec()`.

mod bernoulli;
mod context;
mod erf;
mod gamma;
mod ray;
mod zeta;

pub use bernoulli::{bernoulli_even, warm as warm_bernoulli};
pub use context::{bits_for_digits, PrecisionContext};
pub use erf::{erf_f64, erf_hp};
pub use gamma::gamma_complex;
pub(crate) use ray::pow_ray_prec;
pub use ray::{pow_ray, RayComplex};
pub use zeta::{hurwitz_zeta_integer, zeta_even};

pub type HpComplex = rug::Complex;
pub type HpReal = rug::Float;

use rug::{Complex, Float};

/// |z| as f64, for diagnostics and budgeting.
pub fn abs_f64(z: &Complex) -> f64 {
    Float::with_val(64, z.abs_ref()).to_f64()
}

/// |a − b| at the precision of `a`.
pub fn abs_diff(a: &Complex, b: &Complex) -> Float {
    let p = a.prec().0.max(b.prec().0);
    Float::with_val(p, Complex::with_val(p, a - b).abs_ref())
}

/// |a − b| / max(|b|, floor).
pub fn rel_diff(a: &Complex, b: &Complex, floor: f64) -> f64 {
    let d = abs_diff(a, b).to_f64();
    let m = abs_f64(b).max(floor);
    d / m
}

/// `e^(i·x)` for real `x`.
pub fn expi(x: &Float, prec: u32) -> Complex {
    let (s, c) = Float::with_val(prec, x).sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}

/// `e^(w)` for complex `w`.
pub fn exp_c(w: &Complex, prec: u32) -> Complex {
    Complex::with_val(prec, w.exp_ref())
}
