use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("field of order {0} exceeds the supported size 2^20")]
    FieldTooLarge(u64),
    #[error("{0} is not an odd prime power")]
    NotPrimePower(u64),
    #[error("element index {index} out of range for q = {q}")]
    IndexOutOfRange { index: u64, q: u32 },
    #[error("sets belong to different fields (q = {left} vs q = {right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("the set A must be nonempty")]
    EmptyA,
    #[error("the set V must be nonempty")]
    EmptyV,
    #[error("{0} is not a nonzero quadratic residue")]
    NotAResidue(u32),
    #[error("q = {0} is too large for the brute-force oracle (limit 17)")]
    FieldTooLargeForOracle(u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("malformed set literal: {0}")]
    ParseSet(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
}
