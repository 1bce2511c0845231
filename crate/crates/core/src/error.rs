use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("level n = {n} is too small (need n >= {min})")]
    LevelTooSmall { n: u32, min: u32 },

    #[error("level n = {0} is too large for this operation")]
    LevelTooLarge(u32),

    #[error("ell = {ell} is in residue class {class} mod 8, outside the supported classes")]
    WrongCongruence { ell: u64, class: u64 },

    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,

    #[error("zeta^{m} != -1 in the given extension field")]
    NotNegacyclicRoot { m: usize },

    #[error("modulus polynomial is not irreducible")]
    Reducible,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("exhaustive scan needs {needed} rank computations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("level j = {0} must be at least 1")]
    InvalidLevel(u32),

    #[error("invalid ramification profile: {0}")]
    InvalidProfile(String),

    #[error("inconsistent Chevalley inputs: {0}")]
    NonIntegralChevalley(String),

    #[error("{0} is not a residue class of an odd prime mod 8")]
    InvalidResidue(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fixture error: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
