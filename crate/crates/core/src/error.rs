use thiserror::Error;

/// Errors surfaced by exact arithmetic and operator composition.
#[derive(Debug, Error)]
pub enum AlgebraError {
    /// Division by an element that is zero or a zero divisor in the radical extension.
    #[error("zero divisor: {0}")]
    ZeroDivisor(String),
    /// A configurable resource cap was exceeded mid-computation.
    #[error("cap exceeded: {what} reached {got} (cap {cap})")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    /// Inputs outside the domain a routine is defined on.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
