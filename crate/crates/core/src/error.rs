use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} qubits vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("malformed Pauli token `{token}`")]
    MalformedToken { token: String },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit index {index} appears more than once")]
    DuplicateQubit { index: usize },

    #[error("invalid excitation indices {indices:?}: {reason}")]
    InvalidIndices { indices: Vec<usize>, reason: &'static str },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("hamiltonian file contains no terms")]
    EmptyHamiltonian,

    #[error("pool of kind `{found}` cannot be used here: {reason}")]
    IncompatiblePool { found: String, reason: String },

    #[error("generator terms do not pairwise commute")]
    NonCommutingGenerator,

    #[error("group {group_id} is not jointly measurable: observables do not pairwise commute")]
    NonCommutingGroup { group_id: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shot budget {budget} is smaller than the {required} groups with a positive share")]
    BudgetTooSmall { budget: u64, required: usize },

    #[error("{n_qubits} qubits exceeds the exact-diagonalization limit of {limit}")]
    TooLarge { n_qubits: usize, limit: usize },

    #[error("shot plan does not match the measurement groups: {0}")]
    PlanMismatch(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
