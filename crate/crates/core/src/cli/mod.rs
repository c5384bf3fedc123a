//! The `zeta` command line: argument parsing, config merging and dispatch.

pub mod config;
pub mod sweep;
pub mod table1;
pub mod terminant_eval;
pub mod validate;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Result, ZetaError};
use config::{Caption, Command, ComplexArg, OutFormat, PolarArg, RunConfig, ThetaRange};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    CheckFailed,
}

#[derive(Debug, Parser)]
#[command(name = "zeta", version, about = "Stokes multipliers of the periodic zeta function")]
pub struct Cli {
    /// TOML file with run settings; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Minimum of S_1 for |a| in {1,2,4,6,8,10,15,20}.
    Table1 {
        /// Compare with the reference rows; exit 4 on mismatch.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        common: Common,
    },
    /// S_n over a range of arg a.
    Sweep {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long = "abs-a", value_name = "A")]
        abs_a: Option<f64>,
        /// RE[,IM]
        #[arg(long, value_parser = parse_with::<ComplexArg>, allow_hyphen_values = true)]
        s: Option<ComplexArg>,
        /// LO:HI:COUNT in units of π.
        #[arg(long, value_parser = parse_with::<ThetaRange>)]
        theta: Option<ThetaRange>,
        /// Pin parameters and truncation indices to a figure panel.
        #[arg(long, value_enum)]
        reproduce: Option<Caption>,
        #[arg(long, value_enum)]
        format: Option<OutFormat>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every identity suite and report residuals.
    Validate {
        /// Also write the report as JSON.
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate one terminant T_ν(z).
    #[command(alias = "terminant-eval")]
    Terminant {
        /// RE[,IM]
        #[arg(long, value_parser = parse_with::<ComplexArg>, allow_hyphen_values = true)]
        nu: Option<ComplexArg>,
        /// MOD:ARG with ARG in units of π.
        #[arg(long, value_parser = parse_with::<PolarArg>, allow_hyphen_values = true)]
        z: Option<PolarArg>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Significant decimal digits (default: ZETA_DIGITS, else 60).
    #[arg(long)]
    pub digits: Option<u32>,
    /// Output file (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn parse_with<T: std::str::FromStr<Err = ZetaError>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: ZetaError| e.to_string())
}

impl Common {
    fn apply(self, cfg: &mut RunConfig) {
        if self.digits.is_some() {
            cfg.digits = self.digits;
        }
        if self.out.is_some() {
            cfg.out_path = self.out;
        }
    }
}

/// The file settings with the command-line flags laid over them.
pub fn merge(cli: Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let Some(sub) = cli.command else {
        if cfg.command.is_none() {
            return Err(ZetaError::Config(
                "no command given; pass a subcommand or set `command` in the config file".into(),
            ));
        }
        return Ok(cfg);
    };
    match sub {
        Sub::Table1 { check, common } => {
            cfg.command = Some(Command::Table1);
            cfg.check |= check;
            common.apply(&mut cfg);
        }
        Sub::Sweep {
            n,
            abs_a,
            s,
            theta,
            reproduce,
            format,
            common,
        } => {
            cfg.command = Some(Command::Sweep);
            cfg.n = n.or(cfg.n);
            cfg.abs_a = abs_a.or(cfg.abs_a);
            cfg.s = s.or(cfg.s);
            cfg.theta = theta.or(cfg.theta);
            cfg.reproduce_caption = reproduce.or(cfg.reproduce_caption);
            cfg.out_format = format.unwrap_or(cfg.out_format);
            common.apply(&mut cfg);
        }
        Sub::Validate { json, common } => {
            cfg.command = Some(Command::Validate);
            cfg.json_path = json.or(cfg.json_path);
            common.apply(&mut cfg);
        }
        Sub::Terminant { nu, z, common } => {
            cfg.command = Some(Command::TerminantEval);
            cfg.nu = nu.or(cfg.nu);
            cfg.z = z.or(cfg.z);
            common.apply(&mut cfg);
        }
    }
    Ok(cfg)
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command.ok_or_else(|| ZetaError::Config("no command".into()))? {
        Command::Table1 => table1::run(cfg),
        Command::Sweep => sweep::run(cfg),
        Command::Validate => validate::run(cfg),
        Command::TerminantEval => terminant_eval::run(cfg),
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    let result = merge(cli).and_then(|cfg| execute(&cfg));
    match result {
        Ok(Outcome::Success) => EXIT_SUCCESS,
        Ok(Outcome::CheckFailed) => EXIT_CHECK,
        Err(e) => {
            eprintln!("zeta: {e}");
            e.exit_code()
        }
    }
}

/// Writes to `path`, or stdout when there is none.
pub(crate) fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| ZetaError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

pub(crate) fn csv_err(e: csv::Error) -> ZetaError {
    ZetaError::Io(e.to_string())
}

pub(crate) fn csv_finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| ZetaError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        merge(Cli::try_parse_from(args).map_err(|e| ZetaError::Config(e.to_string()))?)
    }

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("run.toml");
        std::fs::write(&file, "command = \"sweep\"\nn = 2\nabsA = 5\ndigits = 40\n").unwrap();
        let f = file.to_str().unwrap();

        let cfg = parse(&["zeta", "--config", f]).unwrap();
        assert_eq!(
            (cfg.command, cfg.n, cfg.abs_a, cfg.digits),
            (Some(Command::Sweep), Some(2), Some(5.0), Some(40))
        );

        let cfg = parse(&["zeta", "--config", f, "sweep", "--abs-a", "7", "--s", "2,-0.5"]).unwrap();
        assert_eq!((cfg.n, cfg.abs_a), (Some(2), Some(7.0)));
        assert_eq!(cfg.s, Some(ComplexArg { re: 2.0, im: -0.5 }));
        assert_eq!(cfg.digits, Some(40));
    }

    #[test]
    fn missing_command_is_a_config_error() {
        let e = parse(&["zeta"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn bad_values_exit_with_config_code() {
        assert_eq!(main_with_args(["zeta", "sweep", "--theta", "0.7:0.3:4"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["zeta", "terminant", "--nu", "3"]), EXIT_CONFIG);
    }

    #[test]
    fn terminant_accepts_negative_arguments() {
        let cfg = parse(&["zeta", "terminant", "--nu", "12.5,-0.5", "--z", "20:-0.3"]).unwrap();
        assert_eq!(cfg.z.unwrap().arg_over_pi, -0.3);
        assert_eq!(cfg.command, Some(Command::TerminantEval));
    }
}
