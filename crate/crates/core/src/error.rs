use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("zero direction")]
    ZeroDirection,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("symbol {symbol:?} is not in the {which} alphabet")]
    UnknownSymbol { which: &'static str, symbol: String },

    #[error("observation has no positive-probability explanation")]
    Unexplainable,

    #[error("enumeration of {requested} observations exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: u128 },

    #[error("parameters outside the supported budget: {0}")]
    OutOfBudget(String),

    #[error("bound violated: {0}")]
    BoundViolated(String),

    #[error("malformed model: {0}")]
    Model(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
