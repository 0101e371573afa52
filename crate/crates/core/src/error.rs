use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Hypothesis violations carry the name of the failing inequality so the
/// CLI can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported dimension {n} for {what}")]
    UnsupportedDimension { n: usize, what: &'static str },

    #[error("weight evaluation failed at {point:?}: {detail}")]
    Evaluation { point: Vec<f64>, detail: String },

    #[error("integral diverges or is not finite ({0})")]
    Divergent(String),

    #[error("matrix is not symmetric positive definite")]
    NotSpd,

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("{0} is undefined for this test function")]
    Undefined(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}

pub(crate) fn hypothesis(detail: impl Into<String>) -> Error {
    Error::Hypothesis(detail.into())
}
