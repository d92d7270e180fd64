use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be {expected}, got {got}")]
    BadDimension { expected: String, got: String },

    #[error("matrix not symmetric: max |M - M^T| = {defect:.3e} exceeds {tol:.3e}")]
    NotSymmetric { defect: f64, tol: f64 },

    #[error("matrix not positive semidefinite: min eigenvalue {min_eig:.3e} below -{tol:.3e}")]
    NotPsd { min_eig: f64, tol: f64 },

    #[error("matrix not symplectic: ||S Omega S^T - Omega|| = {defect:.3e} exceeds {tol:.3e}")]
    NotSymplectic { defect: f64, tol: f64 },

    #[error("mode count must be at least 1")]
    NoModes,

    #[error("partition {sizes:?} does not cover {modes} modes")]
    BadPartition { sizes: Vec<usize>, modes: usize },

    #[error("angle lists must have one entry per mode but the last: {0}")]
    BadAngleCount(String),

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("operation needs {expected} samples, got {got}")]
    NotEnoughSamples { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
