use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Parameters outside the standing assumption `alpha * delta != 0`, or a
    /// zero scaling factor.
    #[error("parameter domain: {0}")]
    ParameterDomain(String),

    #[error("branch selection: {0}")]
    Branch(String),

    /// Parameters not in the class an operation requires.
    #[error("classification: {0}")]
    Classification(String),

    #[error("arithmetic mode: {0}")]
    Mode(String),

    #[error("index range: {0}")]
    Range(String),

    /// A zero (or otherwise unusable) value where a nonzero one is required.
    #[error("domain: {0}")]
    Domain(String),

    #[error("laplace spec: {0}")]
    Spec(String),

    #[error("numeric: {0}")]
    Numeric(String),

    /// An exact check failed, so no certificate can be issued.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
