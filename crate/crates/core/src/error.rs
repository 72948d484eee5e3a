use thiserror::Error;

/// Errors produced anywhere in the core crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {what}: {detail}")]
    Domain { what: String, detail: String },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("pole of {what} at {at}")]
    Pole { what: &'static str, at: f64 },

    #[error("unsupported range for {what}: {detail}")]
    UnsupportedRange { what: &'static str, detail: String },

    #[error("{what} did not converge: {detail}")]
    Convergence { what: &'static str, detail: String },

    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("builtin `{name}` expects {expected} argument(s), got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },

    #[error("unbound parameter `{0}`")]
    Unbound(String),

    #[error("derivative not supported through `{0}`")]
    UnsupportedDerivative(String),

    #[error("error in `{expr}`: {source}")]
    InExpr {
        expr: String,
        #[source]
        source: Box<Error>,
    },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("unknown catalog entry `{0}`")]
    NotFound(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: impl Into<String>, detail: impl Into<String>) -> Error {
    Error::Domain {
        what: what.into(),
        detail: detail.into(),
    }
}
