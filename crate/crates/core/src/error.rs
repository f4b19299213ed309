use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite target state component")]
    NonFiniteState,

    #[error("zero-range state: target sits at the radar origin")]
    ZeroRange,

    #[error("target left field of view (angle {0:.3} deg outside [-90, 90))")]
    OutOfFieldOfView(f64),

    #[error("duplicate angle bin {0}: targets must occupy distinct bins")]
    DuplicateBin(usize),

    #[error("zero virtual-array vector")]
    ZeroVector,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scenario validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("{path}: {source}")]
    ConfigParse {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("cannot read scenario {path}: {source}")]
    ConfigRead {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
