use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    GammaPole(f64),

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("{what} did not converge within {budget} steps")]
    NonConvergence { what: &'static str, budget: usize },

    #[error("{0} overflowed the f64 range")]
    Overflow(&'static str),

    #[error("time {t} is not a node of the prepared grid (step {step})")]
    OffGrid { t: f64, step: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
