//! Configuration-driven front end for `nmq-core`: runs, parameter sweeps and
//! their CSV / JSON outputs.

pub mod config;
pub mod output;
pub mod run;
pub mod sweep;

use std::fmt;

pub use config::{Overrides, RunConfig};
pub use run::{run, write_run, RunOutput, Trace};
pub use sweep::{sweep, write_sweep, SweepOutput};

/// Bumped whenever the layout of `report.json` changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Invalid configuration; nothing has been written.
    Config(String),
    /// The model could not be evaluated.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 1,
            Self::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<nmq_core::Error> for Failure {
    fn from(e: nmq_core::Error) -> Self {
        use nmq_core::Error::*;
        match e {
            InvalidGrid(_) | InvalidModel(_) | Configuration(_) | UnsupportedKernel(_)
            | DegeneratePair | SweepTooSmall(_) | InvalidState(_) | InvalidBloch(_) => {
                Self::Config(e.to_string())
            }
            _ => Self::Numerical(e.to_string()),
        }
    }
}
