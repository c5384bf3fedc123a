//! Single terminant evaluation for debugging.

use super::config::{ComplexArg, PolarArg, RunConfig};
use super::Outcome;
use crate::error::{Result, ZetaError};
use crate::hp::{PrecisionContext, RayComplex};
use crate::terminant::{terminant, terminant_asymptotic, TerminantQuery};

pub fn evaluate(nu: ComplexArg, z: PolarArg, ctx: &PrecisionContext) -> Result<String> {
    let q = TerminantQuery::new(
        ctx.complex((nu.re, nu.im)),
        RayComplex::from_turns(z.modulus, z.arg_over_pi, ctx)?,
    )?;
    let t = terminant(&q, ctx)?;
    let d = Some(ctx.digits() as usize);
    let mut out = format!(
        "nu = {nu}\nz = {}:{} (modulus:arg/pi)\nT = {} {} i\n",
        z.modulus,
        z.arg_over_pi,
        t.real().to_string_radix(10, d),
        t.imag().to_string_radix(10, d),
    );
    match terminant_asymptotic(&q, ctx) {
        Ok((a, regime)) => {
            out += &format!(
                "asymptotic ({regime:?}) = {:.15e} {:+.15e} i\n",
                a.real().to_f64(),
                a.imag().to_f64()
            )
        }
        Err(e) => out += &format!("asymptotic: {e}\n"),
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let nu = cfg.nu.ok_or_else(|| ZetaError::Config("terminant needs --nu".into()))?;
    let z = cfg
        .z
        .ok_or_else(|| ZetaError::Config("terminant needs --z MOD:ARG".into()))?;
    let text = evaluate(nu, z, &cfg.context()?)?;
    super::emit(cfg.out_path.as_deref(), &text)?;
    Ok(Outcome::Success)
}
