use num_complex::Complex64;

/// Errors shared by every module.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what}: no convergence within {terms} terms (partial value {partial})")]
    Truncation {
        what: &'static str,
        terms: usize,
        partial: Complex64,
    },
    #[error("pole: {0}")]
    Pole(String),
    #[error("singular: {0}")]
    Singular(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
