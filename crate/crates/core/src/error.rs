use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Request would exceed a configured size limit.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |A - A^dag| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("eigensolver failed to converge (off-diagonal residual {residual:e})")]
    Convergence { residual: f64 },

    /// Outcome with zero probability under the current prior.
    #[error("outcome {outcome} is impossible at prior {prior}")]
    ImpossibleOutcome { outcome: u8, prior: f64 },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("circuit parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("rank inconsistency: {0}")]
    RankInconsistency(String),

    /// Multi-start fit ended above the requested tolerance.
    #[error("fit did not converge: best infidelity {best_infidelity:e} > tol {tol:e}")]
    FitFailed { best_infidelity: f64, tol: f64 },
}
