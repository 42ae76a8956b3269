use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),

    #[error("invalid minimal open set of `{point}`: {reason}")]
    InvalidMinOpen { point: String, reason: String },

    #[error("map is not total: no image for `{0}`")]
    NotTotal(String),

    #[error("point index {index} out of range for a space of {size} points")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("not a partition: {0}")]
    NotPartition(String),

    #[error("empty list of spaces")]
    EmptyList,

    #[error("malformed system: {0}")]
    Malformed(String),

    #[error("stage index {index} is not represented (system has {stages} stages, cutoff tail)")]
    StageOutOfRange { index: usize, stages: usize },

    #[error("stage {0} has no gluing map")]
    NoGluing(usize),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("map is not continuous")]
    NotContinuous,

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("limit axioms fail: {0}")]
    AxiomFailure(String),

    #[error("parameter exceeds cap: {0}")]
    CapExceeded(String),

    /// A property that a construction guarantees did not hold.
    #[error("construction invariant violated: {0}")]
    Invariant(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
