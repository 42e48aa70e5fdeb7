use alloc::string::String;

/// Errors raised by the core library.
///
/// Several variants (`IntegralityViolation`, `DivisibilityViolation`,
/// `NegativeTransitiveCount`, `BoundViolated`) can only fire if a counting
/// routine is wrong; they are never expected for valid input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("size mismatch: character of S_{lambda} evaluated on a class of S_{class}")]
    SizeMismatch { lambda: usize, class: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at byte {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("signature is not Fuchsian (mu <= 0)")]
    NonFuchsian,
    #[error("signature is cocompact (s = t = 0); free-product counting does not apply")]
    Cocompact,
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("character sum is not integral at n = {n}; counting bug")]
    IntegralityViolation { n: usize },
    #[error("(n-1)! does not divide the transitive count at n = {n}; counting bug")]
    DivisibilityViolation { n: usize },
    #[error("negative transitive count at n = {n}; counting bug")]
    NegativeTransitiveCount { n: usize },
    #[error("period {period} does not divide index {n}")]
    IndivisibleIndex { period: u64, n: usize },
    #[error("no admissible index for genus {genus}: {reason}")]
    NoAdmissibleIndex { genus: u64, reason: String },
    #[error("|Ram(A)| = {size} is odd")]
    ParityViolation { size: usize },
    #[error("invalid bracket value: {0}")]
    InvalidBracket(String),
    #[error("invalid m = {m} for |S| = {s_len}")]
    InvalidM { m: usize, s_len: usize },
    #[error("invalid field data: {0}")]
    InvalidField(String),
    #[error("bound {bound} violated at {witness}")]
    BoundViolated { bound: String, witness: String },
}

pub type Result<T> = core::result::Result<T, Error>;
