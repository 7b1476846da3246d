use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} must be a finite positive number, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("channel gain {name} must be finite and non-negative, got {value}")]
    InvalidGain { name: &'static str, value: f64 },

    #[error("per-relay lists differ in length (si: {si}, id: {id}, ie: {ie})")]
    RelayListLengths { si: usize, id: usize, ie: usize },

    #[error("channel draw has {draw} relays but the scenario has {scenario}")]
    RelayCountMismatch { draw: usize, scenario: usize },

    #[error("relay-selection schemes need at least one relay")]
    NoRelays,

    #[error("relay index {index} out of range for {count} relays")]
    RelayIndexOutOfRange { index: usize, count: usize },

    #[error(
        "max-min closed form enumerates 2^M relay subsets; M = {count} exceeds the cap of {max}"
    )]
    TooManyRelays { count: usize, max: usize },

    #[error("confidence level must lie strictly between 0 and 1, got {0}")]
    InvalidConfidence(f64),

    #[error("at least one Monte-Carlo trial is required")]
    NoTrials,

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("sweep grid is empty")]
    EmptyGrid,

    #[error("nothing to emit")]
    NoRows,

    #[error("unknown scheme {0:?} (expected direct, maxmin or proposed)")]
    UnknownScheme(String),

    #[error("unknown output format {0:?} (expected csv or json)")]
    UnknownFormat(String),

    #[error("output failed: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}
