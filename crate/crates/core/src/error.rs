use thiserror::Error;

use crate::words::Var;

/// Errors raised anywhere in the toolkit.
///
/// Verification *failures* are never errors: they are reported as verdicts.
/// An `Err` means the request itself could not be carried out.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown variable family '{letter}' at position {pos} (expected x or y)")]
    UnknownFamily { pos: usize, letter: char },

    #[error("words {first} and {second} share the variable {var}")]
    DisjointnessViolation { first: usize, second: usize, var: Var },

    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("not a group: {reason}")]
    NotAGroup { reason: String, triple: Option<(usize, usize, usize)> },

    #[error("group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("unknown group spec '{0}'")]
    UnknownSpec(String),

    #[error("variable {0} has no assigned value")]
    UnassignedVariable(Var),

    #[error("subset is not normal: {0}")]
    NotNormalSubset(String),

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("set product of the two subgroups is not a subgroup")]
    ProductNotSubgroup,

    #[error("enumeration budget of {budget} exceeded (needed at least {needed})")]
    BudgetExceeded { budget: u64, needed: u64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("unknown check id '{0}'")]
    UnknownCheckId(String),

    #[error("bad element index {index} (group order {order})")]
    BadIndex { index: usize, order: usize },

    #[error("power condition fails: {0}")]
    PowerConditionFailed(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
