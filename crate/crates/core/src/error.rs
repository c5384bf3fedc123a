use thiserror::Error;

/// Errors raised by the numerical core and the command-line driver.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ZetaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("pole of {function} at distance {distance:e} from the nearest singularity")]
    Pole { function: &'static str, distance: f64 },

    #[error(
        "order {alpha} lies within {distance:e} of a nonpositive integer without being on it; \
         perturb s away from an integer or make it exact"
    )]
    IllConditioned { alpha: String, distance: f64 },

    #[error("insufficient precision: {context}; at least {required_digits} digits are needed")]
    InsufficientPrecision { context: String, required_digits: u32 },

    #[error("truncation plan is not nondecreasing: {0:?}")]
    NonMonotonePlan(Vec<u32>),

    #[error("k-sum tail bound {bound:e} exceeds tolerance; need kMax >= {required_k_max}")]
    TailBound { bound: f64, required_k_max: usize },

    #[error("{0} did not converge")]
    NonConvergence(&'static str),

    #[error("query outside asymptotic regime: {0}")]
    Regime(String),

    #[error("{0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl ZetaError {
    /// Process exit code used by the `zeta` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            ZetaError::Config(_) | ZetaError::InvalidInput(_) | ZetaError::Io(_) => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for ZetaError {
    fn from(e: std::io::Error) -> Self {
        ZetaError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ZetaError>;
