use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("operands belong to different contexts")]
    ContextMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} is not irreducible")]
    NotIrreducible(String),

    #[error("bad reduction at {0}")]
    BadReduction(String),

    #[error("cannot lift coefficient a_{index}: residue has degree {degree}, bound is {bound}")]
    LiftFailure {
        index: usize,
        degree: usize,
        bound: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("search exhausted up to degree {max_degree}")]
    SearchExhausted { max_degree: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SearchExhausted { .. } => 3,
            Error::Invariant(_) | Error::LiftFailure { .. } => 4,
            Error::Io(_) | Error::Csv(_) => 1,
            _ => 2,
        }
    }
}
