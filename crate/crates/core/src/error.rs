use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    /// The dense oracle paths refuse to allocate beyond their size guard.
    #[error("{what} needs {n_qubits} qubits, limit is {limit}")]
    Resource {
        what: &'static str,
        n_qubits: usize,
        limit: usize,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("state norm drifted to {norm} (tolerance {tolerance})")]
    NormDrift { norm: f64, tolerance: f64 },

    #[error("operator is not Hermitian: imaginary part {imag} on {label}")]
    NonHermitian { label: String, imag: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_same_size(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::QubitMismatch { left, right })
    }
}
