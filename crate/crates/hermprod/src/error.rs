use thiserror::Error;

/// Errors shared across the evaluation, quadrature and analysis modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A floating-point evaluation exceeded the representable range.
    #[error("floating-point overflow: {0}")]
    Overflow(String),

    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed to reach its tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A scan or construction exceeded its configured budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
