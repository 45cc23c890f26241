use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent n must be at least 1")]
    ZeroExponent,
    #[error("{p}^{n} - 1 does not fit below 2^32")]
    ModulusTooLarge { p: u64, n: u32 },
    #[error("modulus p^n - 1 = 1 has no nontrivial Frobenius coset")]
    DegenerateModulus,
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("{0} is not a canonical representative of the quotient group")]
    InvalidElement(u64),
    #[error("{value} is not a power of {p} modulo {modulus}")]
    NotInFrobeniusCoset { value: u64, p: u64, modulus: u64 },
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid suitable sequence: {reason}")]
    InvalidSequence {
        reason: String,
        /// Normalized text form, when one exists.
        normalized: Option<String>,
    },
    #[error("sequence lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("sequences are not isomorphic under the given scaling")]
    NotIsomorphic,
    #[error("work size {required} exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("{divisor} does not divide {what}")]
    NotDivisible { divisor: u64, what: String },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("internal counting error: {0}")]
    InternalCount(String),
}

pub type Result<T> = std::result::Result<T, Error>;
