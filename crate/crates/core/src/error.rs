use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested accuracy or size needs more resources than the configured cap.
    #[error("capacity exceeded: {what} requires {required}, cap is {cap}")]
    Capacity {
        what: &'static str,
        required: f64,
        cap: f64,
    },

    /// The evaluation point sits on (or numerically next to) a zero of the product.
    #[error("singular point: t = {t} is within the zero neighborhood of t0 = {nearest_zero}")]
    Singular { t: f64, nearest_zero: f64 },

    /// A quantity needed by the operation could not be computed.
    #[error("dependency failed: {0}")]
    Dependency(String),

    /// Two curves or tables are not defined on the same grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
