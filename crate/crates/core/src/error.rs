use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("permutation degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group closure exceeds the size cap of {cap} elements")]
    SizeCapExceeded { cap: usize },

    #[error("subgroups belong to different parent groups")]
    ParentMismatch,

    #[error("matrix annotation: {0}")]
    Matrix(String),

    #[error("character table: {0}")]
    CharacterTable(String),

    #[error("multiplicity residual {residual:.3e} exceeds tolerance {tolerance:.1e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("space: {0}")]
    Space(String),

    #[error("point: {0}")]
    Point(String),

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("weight: {0}")]
    Weight(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed user input rather than a bug or a
    /// numerical breakdown.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::Residual { .. } | Error::CharacterTable(_) | Error::Oracle(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
