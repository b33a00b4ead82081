use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("Dih() requires an abelian group; {a} and {b} do not commute")]
    NonAbelian { a: usize, b: usize },

    #[error("failed to load table {path}: {message}")]
    TableLoad { path: PathBuf, message: String },

    #[error("malformed Cayley table: {0}")]
    MalformedTable(String),

    #[error("group order {order} exceeds the {what} cap of {cap}")]
    Capacity { what: &'static str, order: usize, cap: usize },

    #[error("the trivial group is not supported here: {0}")]
    TrivialGroup(&'static str),

    #[error("{0}")]
    OutOfScope(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not a position of the game: {0}")]
    NotAPosition(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Capacity and scope errors are reported per item and do not count as
    /// disagreements in verification runs.
    pub fn is_capacity_like(&self) -> bool {
        matches!(
            self,
            Error::Capacity { .. } | Error::OutOfScope(_) | Error::TrivialGroup(_) | Error::Unsupported(_)
        )
    }
}
