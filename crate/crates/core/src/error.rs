use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("register size {0} out of range (1..={max} qubits)", max = crate::statevector::MAX_QUBITS)]
    Size(usize),

    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("invalid qubit arguments: {0}")]
    QubitArgs(String),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("amplitude vector is not normalized (sum of squares = {0})")]
    NotNormalized(f64),

    #[error("invalid amplitude vector: {0}")]
    InvalidAmplitudes(String),

    #[error("degenerate vector: no reading above the floor, cannot normalize")]
    DegenerateVector,

    #[error("invalid RSS reading {value} at AP {ap}: {reason}")]
    InvalidReading {
        ap: usize,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("fingerprint database is empty")]
    EmptyDatabase,

    #[error("duplicate location id {0}")]
    DuplicateLocationId(u32),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("{path}: row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: u64,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}
