use thiserror::Error;

/// Errors raised by the numerical, model and expansion layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative routine stopped before reaching its tolerance.
    #[error("convergence failure in {routine}: best estimate {estimate:e}, error bound {error_bound:e}")]
    Convergence {
        routine: &'static str,
        estimate: f64,
        error_bound: f64,
    },

    #[error("derivative of order {order} requested but the model supports at most {max}")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("moment of order {order} is infinite for tail index {alpha}")]
    InfiniteMoment { order: f64, alpha: f64 },

    #[error("model has no second-order term (rho = -inf)")]
    NoSecondOrder,

    /// The requested evaluation method cannot serve this request.
    #[error("method error: {0}")]
    Method(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
