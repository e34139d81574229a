use thiserror::Error;

/// Errors surfaced by the library. Invariant violations that can only arise
/// from a bug (as opposed to bad input) are asserted instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime or 2 (or exceeds 2^63)")]
    NonPrimeModulus(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("field element {value} out of range for F_{q}")]
    ElementOutOfRange { value: u64, q: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mixed fields: F_{0} vs F_{1}")]
    FieldMismatch(u64, u64),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{child} is not {parent} minus one box")]
    NotBoxRemoval { parent: String, child: String },
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("tableau pair is not a valid insertion pair: {0}")]
    InvalidTableauPair(String),
    #[error("state space has {0} flags, exceeding the enumeration limit {1}")]
    StateSpaceTooLarge(u128, u64),
    #[error("cell {0} is not lumpable: representatives disagree")]
    NotLumpable(String),
    #[error("start state does not match chain dimensions")]
    StartMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
