use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("size guard exceeded: {what} = {value} (limit {limit})")]
    SizeGuard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("{method} did not converge after {iterations} iterations (last energy {last_energy}, residual {residual:e})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        last_energy: f64,
        residual: f64,
        /// Last iterate, so callers can inspect or restart from it.
        last_vector: Vec<(f64, f64)>,
    },

    #[error("start vector vanished after projection")]
    ZeroVector,

    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("gate addresses qubit {0} more than once")]
    RepeatedQubit(usize),

    #[error("control qubit not in |0⟩ (population {population:e} in |1⟩)")]
    ControlNotReady { population: f64 },

    #[error("term cannot be exponentiated with the available gates: {0}")]
    Unexponentiable(String),

    #[error("circuit parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("sign problem: weighted sign sum vanishes")]
    SignProblem,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
