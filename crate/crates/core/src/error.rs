use thiserror::Error;

use crate::syntax::SyntaxError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCap { order: u128, cap: u64 },

    #[error("invalid modulus {0}: cyclic factors need n >= 1")]
    InvalidModulus(i64),

    #[error("residue {residue} out of range for Z{modulus}")]
    ResidueOutOfRange { residue: i64, modulus: u64 },

    #[error("expected {expected} residues, got {got}")]
    ComponentMismatch { expected: usize, got: usize },

    #[error("expected arity {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("{0} requires a nonempty set")]
    EmptySet(&'static str),

    #[error(
        "predicted work {predicted} exceeds the budget {budget}; use a Monte Carlo estimate instead"
    )]
    WorkCap { predicted: u128, budget: u128 },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

impl Error {
    /// Stable machine-readable code used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::OrderCap { .. } | Error::WorkCap { .. } => "resource_cap",
            Error::Syntax(_) => "parse",
            _ => "invalid_input",
        }
    }

    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::OrderCap { .. } | Error::WorkCap { .. })
    }
}
