use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the space has no points")]
    EmptySpace,
    #[error("point `{0}` declared twice")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("the relation is empty")]
    EmptyRelation,
    #[error("enumeration budget of {cap} exceeded after {partial} items")]
    Overflow { partial: usize, cap: usize },
    #[error("space has {size} points, oracle bound is {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("rule set is not closed: {0}")]
    NotClosed(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}
