use thiserror::Error;

/// Errors raised by the symbolic and numeric layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("bidegree mismatch: expected {expected}, found {found}")]
    BidegreeMismatch { expected: String, found: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero polynomial: {0}")]
    ZeroPolynomial(&'static str),

    #[error("polynomials share a common factor: {0}")]
    CommonFactor(String),

    #[error("sampling exhausted after {tries} tries")]
    Exhausted {
        tries: usize,
        histogram: std::collections::BTreeMap<String, usize>,
    },

    #[error("all three branch curves vanish at the base point")]
    TriplePoint,

    #[error("canonical image vanishes identically at a point")]
    ImageVanishes,

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
