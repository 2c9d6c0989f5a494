use thiserror::Error;

/// Errors raised by the iterations, the oracle and the optimizer.
#[derive(Debug, Error)]
pub enum QaoaError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The quantum expectation is real; a sizeable imaginary part means a bug.
    #[error("residual imaginary part {imag:e} exceeds {tolerance:e} (real part {real})")]
    ImaginaryResidual {
        real: f64,
        imag: f64,
        tolerance: f64,
    },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("tree needs {qubits} qubits, above the cap of {cap}")]
    SizeCap { qubits: usize, cap: usize },

    #[error("state norm drifted to {norm} after {layer}")]
    NormDrift { norm: f64, layer: String },

    #[error("hypergraph contains a Berge cycle at hyperedge {edge}")]
    Cycle { edge: usize },

    #[error("G entry ({row}, {col}) read at step {step} before it was placed")]
    UnplacedRead { row: usize, col: usize, step: usize },

    #[error("objective evaluation failed: {0}")]
    EvaluationFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, QaoaError>;
