use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid step set: {0}")]
    InvalidStepSet(String),
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("numerical underflow: {0}")]
    Underflow(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("criticality check failed: {0}")]
    NotCritical(String),
    #[error("vanishing hessian at {0}")]
    VanishingHessian(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown model: {0}")]
    UnknownModel(String),
    #[error("estimation failed: {0}")]
    Estimation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
