use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {0} out of range (1..={max})", max = crate::pauli::MAX_QUBITS)]
    QubitCount(usize),
    #[error("empty Pauli string")]
    EmptyPauli,
    #[error("invalid Pauli letter {0:?}")]
    BadLetter(char),
    #[error("malformed Pauli string {0:?}")]
    MalformedPauli(String),
    #[error("width mismatch: expected {expected} qubits, got {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("qubit index {index} out of range 1..={n}")]
    QubitIndex { index: usize, n: usize },
    #[error("swap needs two distinct qubits, got {0} and {0}")]
    DegenerateSwap(usize),
    #[error("malformed readout operation {0:?}")]
    MalformedOp(String),
    #[error("no observed spins in detection model")]
    EmptyObserved,
    #[error("coupling map is not symmetric or has a diagonal entry at ({0}, {1})")]
    BadCoupling(usize, usize),
    #[error("non-positive cost {cost} for {op}")]
    NonPositiveCost { op: String, cost: f64 },
    #[error("candidate list is empty")]
    NoCandidates,
    #[error("unknown readout operation {0:?}")]
    UnknownOp(String),
    #[error("family and cost lists differ in length ({family} vs {costs})")]
    CostLength { family: usize, costs: usize },
    #[error("time budget must be positive")]
    Budget,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
