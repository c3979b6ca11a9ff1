use thiserror::Error;

/// Failure modes shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain: {0}")]
    Domain(String),

    /// A result would exceed the representable range of f64.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A result is computable but cannot meet the requested accuracy.
    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    /// An iteration (quadrature refinement, root polish, ODE march) hit its cap.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The zero table violates the even/odd interlacing law after rescans.
    #[error("interlacing violation: {0}")]
    Interlacing(String),

    /// A seed Wronskian vanished (or nearly so) where it must not.
    #[error("singular Wronskian: {0}")]
    SingularWronskian(String),

    /// Finite-difference box too small for the requested levels.
    #[error("box too small: {0}")]
    BoxTooSmall(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit-code class for the CLI: 2 for input/evaluation problems,
    /// 1 for invariant violations detected in otherwise-computed results.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Interlacing(_) => 1,
            _ => 2,
        }
    }
}
