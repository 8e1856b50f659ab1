use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid seeds: {0}")]
    InvalidSeeds(String),

    #[error("seeds are inconsistent with the stabilizers; violated stabilizers {stabilizers:?}")]
    InconsistentSeeds { stabilizers: Vec<usize> },

    #[error("stabilizers and seeds leave qubits {qubits:?} undetermined")]
    Underdetermined { qubits: Vec<usize> },

    #[error("code has no labels")]
    MissingLabels,

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("unsupported gate {gate} on this backend")]
    UnsupportedGate { gate: String },

    #[error("non-Clifford gate {0} where a Clifford circuit is required")]
    NonClifford(String),

    #[error("forced outcome {forced} contradicts deterministic outcome {actual}")]
    ForcedContradiction { forced: i8, actual: i8 },

    #[error("projection onto outcome with probability {0:e} underflows")]
    NormUnderflow(f64),

    #[error("encoder leaves an X factor on qubit {qubit} in the image of Z on qubit {source_qubit}")]
    ResidualX { source_qubit: usize, qubit: usize },

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("deformation error: {0}")]
    Deformation(String),

    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("infeasible generator spec: {0}")]
    Infeasible(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
