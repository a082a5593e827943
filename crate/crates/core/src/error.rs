//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state construction, linear algebra, and measure
/// evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Shape or size of an input does not match what the operation needs.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A matrix that must be Hermitian deviates from its adjoint beyond
    /// tolerance.
    #[error("symmetry error: {0}")]
    Symmetry(String),

    /// An iterative kernel hit its sweep cap before reaching tolerance.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// A scalar or matrix argument is outside the operation's domain.
    #[error("argument error: {0}")]
    Argument(String),

    /// The requested measure is not defined for these dimensions
    /// (d = min(m, n) = 1 admits no entanglement).
    #[error("undefined measure: {0}")]
    UndefinedMeasure(String),

    /// A state failed its type invariants (normalization, Hermiticity,
    /// positivity, finiteness).
    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
