use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (max entrywise deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("not a probability vector: {0}")]
    InvalidSpectrum(String),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("message index ({m},{n}) out of range for alphabet dimension {d}")]
    MessageOutOfRange { m: usize, n: usize, d: usize },

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("states are linearly dependent (Gram min eigenvalue {min_eigenvalue:.3e})")]
    LinearlyDependent { min_eigenvalue: f64 },

    #[error("efficiencies are infeasible: X - diag(gamma) has eigenvalue {min_eigenvalue:.3e}")]
    Infeasible { min_eigenvalue: f64 },

    #[error("operator set is not a POVM: {0}")]
    InvalidPovm(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
