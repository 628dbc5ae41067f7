pub mod ffield;
pub mod geometry;
pub mod rng;
pub use ffield::{Field, FieldElement, MultiplicativeSubgroup};
pub use geometry::{FVector, PointSet, ProjectiveLine};
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported extension degree {0} (only 1 and 2 are implemented)")]
    BadDegree(u32),
    #[error("characteristic-2 extension fields are not supported")]
    CharTwoExtension,
    #[error("{0} is not a prime or the square of a prime")]
    BadFieldOrder(u64),
    #[error("operands live in different fields")]
    MixedFields,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element encoding {enc} out of range for field of order {q}")]
    BadEncoding { enc: u64, q: u64 },
    #[error("subgroup order {m} does not divide the group order {group_order}")]
    OrderDoesNotDivide { m: u64, group_order: u64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("universe q^d = {q}^{d} does not fit the encoding range")]
    UniverseTooLarge { q: u64, d: usize },
    #[error("work budget exceeded: {cost} > {budget} {unit}; {hint}")]
    BudgetExceeded {
        cost: u128,
        budget: u128,
        unit: &'static str,
        hint: &'static str,
    },
    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("sample size {m} exceeds universe size {universe}")]
    SampleTooLarge { m: u64, universe: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("set file: {0}")]
    SetFile(String),
    #[error("config: {0}")]
    Config(String),
    #[error("unknown graph format {0:?} (supported: plain, dimacs)")]
    UnknownFormat(String),
    #[error("construction requires {0}")]
    ConstructionPrecondition(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
