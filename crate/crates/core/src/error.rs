use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("observable is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitianObservable { deviation: f64 },
    #[error("eigen-iteration did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    #[error("state is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("state is not a density matrix: {0}")]
    InvalidState(String),
    #[error("total state is not pure (purity {purity:.12})")]
    NotPure { purity: f64 },
    #[error("observable spectrum is degenerate (min gap {gap:.3e})")]
    DegenerateSpectrum { gap: f64 },
    #[error("state is a product state (smallest Schmidt coefficient {coefficient:.3e})")]
    ProductState { coefficient: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error in {source_name}: {message}")]
    Parse { source_name: String, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
