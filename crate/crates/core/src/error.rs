//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ordinal: {0}")]
    Ordinal(String),

    #[error("element does not belong to the quasi-order: {0}")]
    ElementMismatch(String),

    #[error("quasi-order is not valid: {0}")]
    InvalidQo(String),

    #[error("base quasi-orders differ")]
    BaseMismatch,

    #[error("empty set term is not allowed")]
    EmptySet,

    #[error("empty denotation: {0}")]
    EmptyDenotation(String),

    #[error("rank undefined on urelements")]
    RankOnUrelement,

    #[error("prefix is not bad: offending pair ({0}, {1})")]
    NotBad(usize, usize),

    #[error("cut not representable")]
    CutNotRepresentable,

    #[error("position out of range")]
    OutOfRange,

    #[error("truncation too small")]
    TruncationTooSmall,

    #[error("bound too small")]
    BoundTooSmall,

    #[error("supports not finite")]
    SupportsNotFinite,

    #[error("enumeration unsupported for this quasi-order")]
    EnumerationUnsupported,

    #[error("array is not tame: {0}")]
    NotTame(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
