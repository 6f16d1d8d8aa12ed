use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid subsystem selection: {0}")]
    InvalidSelection(String),

    #[error("subsystem groups overlap at index {0}")]
    OverlappingGroups(usize),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("operator is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid Pauli symbol {0:?} (expected one of 0,1,2,3)")]
    InvalidPauliSymbol(char),

    #[error("schmidt decomposition needs at least two subsystems")]
    SingleSubsystem,

    #[error("states are not purifications of the same state (reduction deviation {deviation:e})")]
    ReductionMismatch { deviation: f64 },

    #[error("group {group} is not classical (max off-diagonal {off_diagonal:e})")]
    NotClassical { group: String, off_diagonal: f64 },

    #[error("wrong number of groups: {0}")]
    GroupArity(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("invalid parameter n = {n}: {reason}")]
    InvalidN { n: usize, reason: String },

    #[error("simulation dimension {dimension} exceeds the supported limit {limit}")]
    DimensionLimit { dimension: usize, limit: usize },

    #[error("input protocol fails verification: {0}")]
    UnverifiedProtocol(String),

    #[error("oblivious RSP check `{check}` failed on probe {probe} (deviation {deviation:e})")]
    NotOblivious {
        check: String,
        probe: usize,
        deviation: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
