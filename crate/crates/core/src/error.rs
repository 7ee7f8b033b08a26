use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (defect {defect:.3e}, tolerance {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not unitary (defect {defect:.3e}, tolerance {tol:.3e})")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal mass {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("decompositions represent different states (distance {0:.3e})")]
    DecompositionMismatch(f64),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid class specification: {0}")]
    InvalidSpec(String),

    #[error("wrong state class: {0}")]
    WrongClass(String),

    #[error("construction check failed: {0}")]
    Construction(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
