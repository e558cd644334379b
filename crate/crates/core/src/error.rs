use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("vector has {0} finite entries, at least 2 are required")]
    TooFewFinite(usize),

    #[error("sequence of length {len} is too short, need at least {need}")]
    SequenceTooShort { len: usize, need: usize },

    #[error("sequence does not satisfy the vector")]
    NotSatisfying,

    #[error("search budget of {limit} nodes exceeded ({seen} seen)")]
    BudgetExceeded { limit: u64, seen: u64 },

    #[error("unsupported vector for this method: {0}")]
    Unsupported(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("constraint system is infeasible")]
    Infeasible,

    #[error("point is not in the vertex polyhedron")]
    NotInPolyhedron,

    #[error("oracle and graph disagree: {0}")]
    Disagreement(String),
}
