use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("parts are not weakly decreasing: {0:?}")]
    NotPartition(Vec<u32>),

    #[error("inner partition {inner} is not contained in outer partition {outer}")]
    NotContained { outer: String, inner: String },

    #[error("cell set is not a skew shape: {0}")]
    NotSkew(String),

    #[error("shape {0} is not a connected ribbon")]
    NotConnectedRibbon(String),

    #[error("shape {0} is not connected")]
    Disconnected(String),

    #[error("invalid W-O-W structure: {0}")]
    InvalidStructure(String),

    #[error("copies of gamma do not fit together consistently at box {0}")]
    InconsistentPlacement(String),

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },

    #[error("required ribbons have linearly dependent Schur functions")]
    DependentRequired,

    #[error("shape {0} is a connected ribbon")]
    IsConnectedRibbon(String),

    #[error("beta = {0} is not a rectangle with its lower right corner removed")]
    BadBeta(String),

    #[error("theorem hypotheses fail: {0}")]
    HypothesesFail(String),
}
