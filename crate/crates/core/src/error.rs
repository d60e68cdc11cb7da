use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the empty coordinate subset is not allowed here")]
    EmptySubset,

    #[error("dimension {0} exceeds the supported maximum of {max} for subset enumeration", max = crate::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("cell grid with {cells} cells exceeds the limit of {limit}")]
    TooManyCells { cells: u128, limit: usize },

    /// Adaptive quadrature ran out of subdivisions before reaching the
    /// requested tolerance. `partial` is the best estimate, `bound` its
    /// estimated absolute error.
    #[error("quadrature budget exhausted: partial value {partial:e} with error bound {bound:e}")]
    QuadratureBudget { partial: f64, bound: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
