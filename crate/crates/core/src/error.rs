use thiserror::Error;

/// Errors produced by the certifiers, constructions and the explorer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite entry (NaN or infinity) in input")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("enumeration guard exceeded: {what} needs {required}, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("vandermonde bases must be pairwise distinct (base {0} repeats)")]
    DuplicateBases(f64),

    #[error("bad parameter: {0}")]
    BadParam(String),

    #[error("ensemble does not span the ambient space")]
    NotSpanning,

    #[error("ensemble is not a unit norm tight frame")]
    NotUntf,

    #[error("incompatible specification: {0}")]
    IncompatibleSpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
