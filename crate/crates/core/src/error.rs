use thiserror::Error;

use crate::solver::SolveResult;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} is not a power of two with at least 4 points")]
    NonPowerOfTwoSize(usize),
    #[error("Robin coefficients b and d must be nonzero")]
    RobinDegenerate,
    #[error("Robin diagonal entries C = {c}, D = {d} must lie in [0, 2)")]
    RobinOutOfRange { c: f64, d: f64 },
    #[error("expected a vector of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("size {size} exceeds the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("unsupported: {0}")]
    UnsupportedVariant(String),
    #[error("diagonal {0:?} has no known single-ancilla encoding")]
    UnsupportedDiagonal(Vec<f64>),
    #[error("statevector has length {found}, circuit needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("conjugate gradient stopped after {} iterations with relative residual {:.3e}", .best.iterations, .best.relative_residual())]
    MaxIterExceeded { best: Box<SolveResult> },
    #[error("qasm parse error on line {line}: {message}")]
    QasmParse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
