use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("analyticity violation: rho = {rho} is not below rho_max = {rho_max}")]
    Analyticity { rho: f64, rho_max: f64 },

    /// `log10_cancellation` estimates how many digits the computation would lose.
    #[error("precision loss in {context}: estimated cancellation 1e{log10_cancellation:.1}")]
    Precision {
        context: String,
        log10_cancellation: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
