//! Run configuration shared by the command line and TOML config files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::expansion::TruncationPlan;
use crate::hp::PrecisionContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Table1,
    Sweep,
    Validate,
    TerminantEval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    #[default]
    Csv,
    Json,
}

/// Preset sweeps with fixed parameters and truncation indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Caption {
    Fig1a,
    Fig1b,
    Fig1c,
}

/// Everything a caption pins.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptionPreset {
    pub n: u32,
    pub abs_a: f64,
    pub s: ComplexArg,
    pub theta: ThetaRange,
    pub nk: Vec<u32>,
    pub nk_prime: Vec<u32>,
}

impl Caption {
    pub fn preset(self) -> CaptionPreset {
        let (n, abs_a, s, theta, nk, nk_prime) = match self {
            Caption::Fig1a => (1, 6.0, (3.0, 0.0), (0.3, 0.7), vec![17], vec![17]),
            Caption::Fig1b => (1, 8.0, (2.0, 0.5), (0.3, 0.7), vec![25], vec![24]),
            Caption::Fig1c => (2, 6.0, (2.0, 0.0), (0.4, 0.6), vec![18, 36], vec![18, 37]),
        };
        CaptionPreset {
            n,
            abs_a,
            s: ComplexArg { re: s.0, im: s.1 },
            theta: ThetaRange {
                lo: theta.0,
                hi: theta.1,
                count: 41,
            },
            nk,
            nk_prime,
        }
    }
}

impl CaptionPreset {
    pub fn plan(&self) -> Result<TruncationPlan> {
        TruncationPlan::new(self.nk.clone(), self.nk_prime.clone())
    }
}

/// A complex number written `re` or `re,im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ComplexArg {
    pub re: f64,
    pub im: f64,
}

impl FromStr for ComplexArg {
    type Err = ZetaError;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || ZetaError::Config(format!("{text:?} is not a complex number of the form RE[,IM]"));
        let mut parts = text.split(',').map(str::trim);
        let re = parts.next().ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?;
        let im = match parts.next() {
            Some(p) => p.parse::<f64>().map_err(|_| bad())?,
            None => 0.0,
        };
        if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        Ok(ComplexArg { re, im })
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{},{}", self.re, self.im)
        }
    }
}

impl TryFrom<String> for ComplexArg {
    type Error = ZetaError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ComplexArg> for String {
    fn from(c: ComplexArg) -> String {
        c.to_string()
    }
}

/// `LO:HI:COUNT`, angles in units of π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ThetaRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl FromStr for ThetaRange {
    type Err = ZetaError;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || ZetaError::Config(format!("{text:?} is not a theta range LO:HI:COUNT"));
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].parse::<f64>().map_err(|_| bad())?;
        let hi = parts[1].parse::<f64>().map_err(|_| bad())?;
        let count = parts[2].parse::<usize>().map_err(|_| bad())?;
        crate::stokes::theta_grid(lo, hi, count).map_err(|e| ZetaError::Config(e.to_string()))?;
        Ok(ThetaRange { lo, hi, count })
    }
}

impl fmt::Display for ThetaRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.count)
    }
}

impl TryFrom<String> for ThetaRange {
    type Error = ZetaError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ThetaRange> for String {
    fn from(t: ThetaRange) -> String {
        t.to_string()
    }
}

/// `MOD:ARG` with the argument in units of π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PolarArg {
    pub modulus: f64,
    pub arg_over_pi: f64,
}

impl FromStr for PolarArg {
    type Err = ZetaError;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || ZetaError::Config(format!("{text:?} is not a polar value MOD:ARG (ARG in units of π)"));
        let (m, t) = text.split_once(':').ok_or_else(bad)?;
        let modulus = m.trim().parse::<f64>().map_err(|_| bad())?;
        let arg_over_pi = t.trim().parse::<f64>().map_err(|_| bad())?;
        if !(modulus > 0.0 && modulus.is_finite() && arg_over_pi.is_finite()) {
            return Err(bad());
        }
        Ok(PolarArg { modulus, arg_over_pi })
    }
}

impl fmt::Display for PolarArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.modulus, self.arg_over_pi)
    }
}

impl TryFrom<String> for PolarArg {
    type Error = ZetaError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PolarArg> for String {
    fn from(p: PolarArg) -> String {
        p.to_string()
    }
}

/// One run of the `zeta` binary. Unset optional fields fall back to the
/// caption preset (if any) and then to the documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Working precision; unset means `ZETA_DIGITS`, else 60.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaRange>,
    #[serde(default)]
    pub out_format: OutFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reproduce_caption: Option<Caption>,
    /// Compare the table against the reference rows.
    #[serde(default)]
    pub check: bool,
    /// Where `validate` writes its JSON report.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<PolarArg>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            digits: None,
            s: None,
            abs_a: None,
            n: None,
            theta: None,
            out_format: OutFormat::Csv,
            out_path: None,
            reproduce_caption: None,
            check: false,
            json_path: None,
            nu: None,
            z: None,
        }
    }
}

pub const DEFAULT_S: ComplexArg = ComplexArg { re: 3.0, im: 0.0 };
pub const DEFAULT_ABS_A: f64 = 6.0;
pub const DEFAULT_THETA: ThetaRange = ThetaRange {
    lo: 0.3,
    hi: 0.7,
    count: 41,
};

/// Sweep parameters after presets and defaults are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub n: u32,
    pub abs_a: f64,
    pub s: ComplexArg,
    pub theta: ThetaRange,
    pub pinned: Option<TruncationPlan>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| ZetaError::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ZetaError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| ZetaError::Config(e.to_string()))
    }

    pub fn context(&self) -> Result<PrecisionContext> {
        match self.digits {
            Some(d) => PrecisionContext::with_digits(d),
            None => PrecisionContext::from_env(),
        }
        .map_err(|e| ZetaError::Config(e.to_string()))
    }

    /// Resolves the sweep parameters. A caption fixes n, |a| and s; giving a
    /// different value alongside it is a config error.
    pub fn sweep_settings(&self) -> Result<SweepSettings> {
        let Some(caption) = self.reproduce_caption else {
            let s = self.s.unwrap_or(DEFAULT_S);
            if s.re <= crate::oracle::ORACLE_MIN_RE_S {
                return Err(ZetaError::Config(format!(
                    "sweeps need Re s > {}, got {s}",
                    crate::oracle::ORACLE_MIN_RE_S
                )));
            }
            let abs_a = self.abs_a.unwrap_or(DEFAULT_ABS_A);
            if !(abs_a > 0.0 && abs_a.is_finite()) {
                return Err(ZetaError::Config(format!("|a| must be positive, got {abs_a}")));
            }
            let n = self.n.unwrap_or(1);
            if n == 0 {
                return Err(ZetaError::Config("n starts at 1".into()));
            }
            return Ok(SweepSettings {
                n,
                abs_a,
                s,
                theta: self.theta.unwrap_or(DEFAULT_THETA),
                pinned: None,
            });
        };
        let p = caption.preset();
        let clash = |what: &str, given: String, fixed: String| {
            ZetaError::Config(format!(
                "{what} = {given} conflicts with {caption:?}, which fixes {fixed}"
            ))
        };
        if let Some(n) = self.n.filter(|&n| n != p.n) {
            return Err(clash("n", n.to_string(), p.n.to_string()));
        }
        if let Some(a) = self.abs_a.filter(|&a| a != p.abs_a) {
            return Err(clash("absA", a.to_string(), p.abs_a.to_string()));
        }
        if let Some(s) = self.s.filter(|&s| s != p.s) {
            return Err(clash("s", s.to_string(), p.s.to_string()));
        }
        Ok(SweepSettings {
            n: p.n,
            abs_a: p.abs_a,
            s: p.s,
            theta: self.theta.unwrap_or(p.theta),
            pinned: Some(p.plan()?),
        })
    }
}
