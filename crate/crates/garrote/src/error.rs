use thiserror::Error;

/// Toolkit-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("failed to converge: {0}")]
    NonConvergence(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for errors caused by how the caller invoked the toolkit
    /// (bad flags, malformed input) rather than by numerical trouble.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::Parse(_) | Error::InvalidArgument(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_classification() {
        assert!(Error::InvalidArgument("x".into()).is_usage());
        assert!(Error::Parse("x".into()).is_usage());
        assert!(!Error::Singular("x".into()).is_usage());
        assert!(!Error::NonConvergence("x".into()).is_usage());
        assert!(!Error::Numeric("x".into()).is_usage());
    }
}
