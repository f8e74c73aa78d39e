use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("degree overflow: result has nonzero degree {degree} outside window [{lo}, {hi}]")]
    Overflow { degree: i32, lo: i32, hi: i32 },
    #[error("invalid value: {0}")]
    Invalid(String),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("object set mismatch: {0}")]
    ObjectMismatch(String),
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error("not stabilized: {0}")]
    NotStabilized(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
