use thiserror::Error;

use crate::double_oracle::EquilibriumResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A plan or query names an id the graph does not contain.
    #[error("unknown {kind} id {id}")]
    InvalidReference { kind: &'static str, id: u64 },

    /// Input data breaks a structural invariant of the game arena.
    #[error("validation failed: {0}")]
    Validation(String),

    /// An operation was called with arguments outside its precondition.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("release node {release} is unreachable from start node {start}")]
    NoPath { start: u64, release: u64 },

    #[error("A* heuristic unavailable: {0}")]
    HeuristicUnavailable(String),

    /// The restricted matrix game could not be solved to a certified equilibrium.
    #[error("matrix game solver failed: {message}")]
    SolverFailure {
        message: String,
        matrix: Vec<Vec<f64>>,
    },

    /// The double-oracle loop hit its iteration cap; carries the last iterate.
    #[error("iteration budget exhausted after {} iterations (gap {:.6})", .0.iterations, .0.gap)]
    BudgetExceeded(Box<EquilibriumResult>),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported export: {0}")]
    UnsupportedFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }
}
