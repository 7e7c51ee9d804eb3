use thiserror::Error;

/// Errors raised by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    /// A three-valued zero test could not be resolved at the maximum precision.
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("parameter `{0}` has no assigned value")]
    UnassignedParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// The input violates a precondition of the operation.
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
