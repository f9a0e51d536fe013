use thiserror::Error;

use crate::field::FieldSpec;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid prime: {0}")]
    InvalidPrime(u64),

    #[error("degree error: {0}")]
    DegreeError(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("curve is not certified smooth")]
    NotSmooth,

    #[error("degenerate cohomology range: {0}")]
    DegenerateRange(String),

    #[error("no torsion section for n = {n} (kernel exponents tried: {tried:?})")]
    NoTorsionSection { n: u32, tried: Vec<u32> },

    #[error("out of range: {0}")]
    RangeError(String),

    #[error("reducible form: {0}")]
    Reducible(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("not bihomogeneous: `{first}` and `{second}` have different bidegrees")]
    NotBihomogeneous { first: String, second: String },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
