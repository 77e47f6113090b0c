use crate::model::Violation;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("object index {index} out of range for {count} objects")]
    ObjectOutOfRange { index: usize, count: usize },
    #[error("rank {rank} out of range 1..={count}")]
    RankOutOfRange { rank: usize, count: usize },
    #[error("invalid preference: {0}")]
    InvalidPreference(String),
    #[error("invalid problem: {}", join(.0))]
    InvalidProblem(Vec<Violation>),
    #[error("invalid assignment: {}", join(.0))]
    InvalidAssignment(Vec<Violation>),
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },
    #[error("size guard: {what} is {value}, limit is {limit}")]
    SizeGuard {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn guard(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::SizeGuard { what, value, limit })
    } else {
        Ok(())
    }
}
