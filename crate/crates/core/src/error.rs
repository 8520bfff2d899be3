use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inclusion not inside unit disk: |C| + R = {0} >= 1")]
    InvalidGeometry(f64),

    #[error("Moebius map singular at this point (|conj(a) x - 1| = {0:e})")]
    Singularity(f64),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
