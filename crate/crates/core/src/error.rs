use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{what} needs {needed}, over the configured limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },

    #[error("{0} is not a vertex of the domino graph")]
    NotAVertex(String),

    #[error("grid dimensions do not match: {0}")]
    DimensionMismatch(String),

    /// A fully filled window does not sum to the trace.
    #[error("window at column {column}, row {row} sums to {sum}, expected {expected}")]
    Inconsistent {
        column: usize,
        row: usize,
        sum: u32,
        expected: u32,
    },

    /// Holes remain but no window has exactly one of them.
    #[error("completion stuck with {holes} unfilled cells")]
    Stuck { holes: usize },

    #[error("paths are not composable: {0}")]
    NotComposable(String),

    #[error("degree ({0}, {1}) is out of range")]
    DegreeOutOfRange(u32, u32),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("graph is not strongly connected")]
    NotStronglyConnected,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant broken: {0}")]
    Internal(String),
}
