use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: error estimate {estimate:e} after {panels} panels")]
    Quadrature { estimate: f64, panels: usize },

    #[error("G table has no entry for index {0}")]
    MissingGIndex(i64),

    #[error("density operator is not positive: eigenvalue {0:e}")]
    Positivity(f64),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("unsupported state shape: {0}")]
    UnsupportedShape(String),

    #[error("X-state closed form invalid: |gxx| = {gxx:e} < |gyy| = {gyy:e}; use the optimized path")]
    XValidity { gxx: f64, gyy: f64 },

    #[error("Lanczos did not converge: residual {residual:e} after {iterations} iterations")]
    Eigensolver { residual: f64, iterations: usize },

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("range ratio undefined: Q(n=1) = {0:e}")]
    UndefinedRatio(f64),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
