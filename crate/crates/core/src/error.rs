//! Error types shared across the crate.

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A physical configuration that cannot be built or classified.
    #[error("config error: {0}")]
    Config(String),

    /// The requested quantum numbers admit no bound state under the
    /// family's quantization condition.
    #[error("no bound state: {0}")]
    InvalidState(String),

    /// A sampled grid that is non-uniform, too coarse, or otherwise unusable.
    #[error("grid error: {0}")]
    Grid(String),

    /// Eigenvalue bisection failed to isolate the requested levels.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The self-consistency function has no sign change in the expanded
    /// search bracket; signals the absence of a bound state under the
    /// chosen target convention.
    #[error("no root: {0}")]
    NoRoot(String),
}

pub type Result<T> = std::result::Result<T, Error>;
