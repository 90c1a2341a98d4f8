use thiserror::Error;

#[derive(Debug, Error)]
pub enum SoogError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("phase error: {0}")]
    Phase(String),
    #[error("rule error: {0}")]
    Rule(String),
    #[error("complementarity violation: {0}")]
    Complementarity(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("dependency error: {0}")]
    Dependency(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, SoogError>;
