use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate sequence (b = {b}, c = {c}): need b != 0, c != 0 and b^2 + 4c > 0")]
    DegenerateSequence { b: i64, c: i64 },

    #[error("coefficient out of range: |b| and |c| must be below 2^31 (got b = {b}, c = {c})")]
    CoefficientOutOfRange { b: i64, c: i64 },

    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("no Frey case applies: {0}")]
    NoApplicableCase(String),

    #[error("case {case}: {what} is not integral")]
    NonIntegralCoefficient { case: u8, what: &'static str },

    #[error("hypothesis index n = {0} is below the minimum of 7")]
    IndexTooSmall(u64),

    #[error("norm list is empty")]
    EmptyNorms,

    #[error("prime list is empty")]
    EmptyList,

    #[error("q = {q} divides 2c(b^2 + 4c)")]
    IrregularPrime { q: u64 },

    #[error("p = {p} does not divide q - 1 = {}", q - 1)]
    UselessPrime { p: u64, q: u64 },

    #[error("residue set grew to {size} entries (cap {cap})")]
    ResidueExplosion { size: usize, cap: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cache file: {0}")]
    Cache(String),
}
