use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence must have at least one entry")]
    EmptySequence,

    #[error("index {index} outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("argument {x} is outside the kernel domain x >= 1")]
    Domain { x: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("kernel pivot theta(1) is zero")]
    ZeroPivot,

    #[error("leading coefficient is zero; sequence is not invertible")]
    ZeroLeadingCoefficient,

    #[error("exact arithmetic unavailable: {0}")]
    NotExact(String),

    #[error("sequence too short: need {needed} entries, have {have}")]
    TooShort { needed: usize, have: usize },

    #[error("{what} is capped at N = {cap} (requested {requested}); raise the cap explicitly")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        requested: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
