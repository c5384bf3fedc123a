pub mod error;
pub mod hp;

pub use error::{Result, ZetaError};
pub mod cli;
pub mod expansion;
pub mod oracle;
pub mod stokes;
pub mod terminant;
