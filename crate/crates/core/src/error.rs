use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid modulus: {0}")]
    BadModulus(String),

    #[error("modulus {0:?} is reducible over the prime field")]
    ReducibleModulus(Vec<u32>),

    #[error("no built-in modulus for p = {p}, r = {r}; supply one explicitly")]
    NoBuiltinModulus { p: u32, r: u32 },

    #[error("field of order {0} exceeds the supported cap of 2^20 elements")]
    FieldTooLarge(u64),

    #[error("division by zero in the field")]
    DivisionByZero,

    #[error("operation is undefined at zero")]
    ZeroInput,

    #[error("q = {0} is not congruent to 1 mod 4")]
    NotOneModFour(u32),

    #[error("{0} is not a nonzero square")]
    NotASquare(String),

    #[error("invalid cover order: {0}")]
    InvalidEll(String),

    #[error("{0} is not a unit modulo {1}")]
    NotUnit(i64, u32),

    #[error("invalid voltage assignment: {0}")]
    InvalidVoltage(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("input is not the spectrum of a cover: {0}")]
    NotACoverSpectrum(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
