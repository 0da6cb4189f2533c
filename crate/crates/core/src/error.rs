use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("label `{0}` appears on both operands")]
    LabelCollision(String),
    #[error("duplicate label `{0}` in layout")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label sets overlap on `{0}`")]
    OverlappingLabels(String),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("layouts differ: {0}")]
    LayoutMismatch(String),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("trace {0} outside (0, 1]")]
    InvalidTrace(f64),
    #[error("expected a normalized state, trace is {0}")]
    NonUnitTrace(f64),
    #[error("degenerate truncation: overlap {0:e} too small")]
    DegenerateTruncation(f64),
    #[error("degenerate pair: states coincide")]
    DegeneratePair,
    #[error("epsilon {0} outside [0, 1)")]
    EpsilonOutOfRange(f64),
    #[error("input is not pure (purity {0})")]
    NotPure(f64),
    #[error("empty part list")]
    EmptyParts,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a valid channel: {0}")]
    NotAChannel(String),
    #[error("infeasible constraint: min eigenvalue of F is {min_eig}, E = {energy}")]
    Infeasible { min_eig: f64, energy: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
