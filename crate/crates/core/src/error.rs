use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The CLI maps these onto exit codes: validation problems become exit 2,
/// engine instability becomes exit 3.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank {0}: need r >= 2")]
    InvalidRank(usize),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("coordinates must sum to zero, got sum {0}")]
    NotSumZero(String),
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("singular basis")]
    SingularBasis,
    #[error("irregular weight {0}")]
    IrregularWeight(String),
    #[error("weight {0} is not in the open simplex")]
    OutsideSimplex(String),
    #[error("invalid root ({0}, {1})")]
    InvalidRoot(usize, usize),
    #[error("not a spanning tree: {0}")]
    NotATree(String),
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("diagonal basis search exhausted for r = {0}")]
    SearchExhausted(usize),
    #[error("not a diagonal basis: {0}")]
    NotDiagonal(String),
    #[error("invalid wall: {0}")]
    InvalidWall(String),
    #[error("inconsistent wall: {0}")]
    InconsistentWall(String),
    #[error("invalid highest weight: {0}")]
    InvalidWeight(String),
    #[error("degenerate linear form")]
    DegenerateRoot,
    #[error("insufficient window: need degree {needed}, have {have}")]
    InsufficientWindow { needed: i64, have: i64 },
    #[error("series is not invertible in the expansion region: {0}")]
    NotInvertible(String),
    #[error("window stabilization failed: {0}")]
    Unstable(String),
    #[error("convention error: {0}")]
    Convention(String),
    #[error("non-integral result {0}")]
    NonIntegral(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by bad user input rather than the engine.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::InsufficientWindow { .. }
                | Error::Unstable(_)
                | Error::Internal(_)
                | Error::NotInvertible(_)
                | Error::SearchExhausted(_)
                | Error::NonIntegral(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
