use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric: entry ({0}, {1}) differs from ({1}, {0})")]
    NotSymmetric(usize, usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no interior SPN witness: best P-eigenvalue margin {0:.3e}")]
    NoWitness(f64),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
