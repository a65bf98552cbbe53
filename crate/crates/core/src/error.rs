use thiserror::Error;

/// Errors raised by group, polynomial and scan operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group too large to enumerate: more than {cap} elements (stopped after {partial})")]
    TooLargeToEnumerate { cap: usize, partial: usize },

    #[error("{0} requires an enumerated group")]
    NotEnumerated(&'static str),

    #[error("group is not transitive")]
    Intransitive,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("denominator vanishes modulo {0}")]
    BadDenominator(u64),

    #[error("leading coefficient vanishes modulo {0}")]
    LeadingCoeffVanishes(u64),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("zero modulus polynomial")]
    ZeroModulus,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("corrupt fixture {name}: {reason}")]
    Fixture { name: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
