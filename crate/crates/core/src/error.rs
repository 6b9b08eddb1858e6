use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// A caller broke a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The score grid cuts off a non-negligible amount of mixture mass.
    #[error("score grid [{lo}, {hi}] clips mixture mass (edge/peak density ratio {ratio:e})")]
    GridClipped { lo: f64, hi: f64, ratio: f64 },

    /// Zero Chernoff information: certification never completes.
    #[error("certification time is infinite (Chernoff information {c})")]
    InfiniteTime { c: f64 },

    /// Invalid parameter or configuration value.
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}

pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.into(),
    }
}
