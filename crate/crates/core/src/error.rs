use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("Bloch vector of length {0} lies outside the unit ball")]
    InvalidBloch(f64),

    #[error("frequency {0} is outside the spectral domain (must be >= 0)")]
    Domain(f64),

    #[error("correlation kernel unsupported for {0} spectral density")]
    UnsupportedKernel(&'static str),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid spectral model: {0}")]
    InvalidModel(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("non-finite kernel value at tau = {tau}")]
    Propagation { tau: f64 },

    #[error("grid index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("rate signal has no finite samples; intervals undeterminable")]
    Undeterminable,

    #[error("initial pair is degenerate (a = 0 and b = 0)")]
    DegeneratePair,

    #[error("rate is flagged divergent at t = {t}")]
    DivergentPoint { t: f64 },

    #[error("pair sweep needs at least 2 pairs, got {0}")]
    SweepTooSmall(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
