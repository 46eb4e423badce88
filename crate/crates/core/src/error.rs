use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("-{0} is not a fundamental discriminant")]
    NotFundamental(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is rank deficient (rank {rank} < degree {degree})")]
    RankDeficient { rank: usize, degree: usize },
    #[error("integrality violation: {0}")]
    Integrality(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("ramified-nonintegral: target not integral at q = {0}")]
    RamifiedNonintegral(u64),
    #[error("density did not stabilize for q = {q} within level {max_level}")]
    NotStabilized { q: u64, max_level: u32 },
    #[error("bridge-calibration-failed at q = {q}: {details}")]
    BridgeCalibrationFailed { q: u64, details: String },
    #[error("fq-inconsistent at q = {q}: {details}")]
    FqInconsistent { q: u64, details: String },
    #[error("missing table entry {0}")]
    MissingEntry(String),
    #[error("not p-integral: {0}")]
    NotPIntegral(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
