use thiserror::Error;

/// Named invariant that a value failed to satisfy.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Invariant {
    #[error("Hermitian invariant violated at ({row}, {col}): deviation {deviation:e}")]
    Hermitian { row: usize, col: usize, deviation: f64 },
    #[error("unit-trace invariant violated: trace = {trace}")]
    UnitTrace { trace: f64 },
    #[error("positive-semidefinite invariant violated: minimum eigenvalue {min_eigenvalue:e}")]
    PositiveSemidefinite { min_eigenvalue: f64 },
    #[error("normalization invariant violated: squared norm = {norm_sqr}")]
    Normalization { norm_sqr: f64 },
    #[error("unitarity invariant violated: max |U U^dagger - I| = {deviation:e}")]
    Unitary { deviation: f64 },
    #[error("orthogonality invariant violated: max |O O^T - I| = {deviation:e}")]
    Orthogonal { deviation: f64 },
    #[error("real-expectation invariant violated for {string}: imaginary part {imag:e}")]
    RealExpectation { string: String, imag: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid party addressing: {0}")]
    Addressing(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("validation error: {0}")]
    Validation(#[from] Invariant),
    #[error("normalization error: unit coefficient is {0}, expected 1")]
    Normalization(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
