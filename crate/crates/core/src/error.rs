use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series or iteration failed to converge within its budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// Parameters fall outside the hypotheses of a theorem or estimate.
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    /// The numerical solution grew past the blow-up threshold.
    #[error("blow-up detected at t = {t}: {detail}")]
    BlowUp { t: f64, detail: String },
    /// Picard iteration stopped contracting.
    #[error("no contraction: {0}")]
    NoContraction(String),
    /// Invalid or unparsable configuration.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
