use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point lies outside the open domain an operation requires.
    #[error("domain error: {0}")]
    Domain(String),

    /// A multivalued atom (power, log) was evaluated off its principal branch sector.
    #[error("branch error: {0}")]
    Branch(String),

    /// Malformed or inconsistent input parameters.
    #[error("input error: {0}")]
    Input(String),

    /// A sampling region is empty or degenerate.
    #[error("sampling error: {0}")]
    Sampling(String),

    /// `arg(1 - conj(sigma) z)` is undefined because `z == sigma`.
    #[error("undefined angle at index {index}: point coincides with the boundary point")]
    UndefinedAngle { index: usize },

    /// Preimages do not accumulate at the requested boundary point.
    #[error("wrong end: preimages do not converge to the boundary point ({0})")]
    WrongEnd(String),

    /// Parameters outside the hypotheses under which a prediction holds.
    #[error("out of hypothesis: {0}")]
    OutOfHypothesis(String),

    /// A scenario precondition (e.g. a domain sandwich) does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Schema violation while reading a scenario; `path` points at the offending field.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
