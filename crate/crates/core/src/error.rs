use thiserror::Error;

/// Errors produced anywhere in the decomposition pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field of size {0} does not fit the element encoding")]
    FieldTooLarge(u128),
    #[error("division by zero")]
    DivisionByZero,
    #[error("point lies outside the domain of the rational function")]
    OutsideDomain,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("total degree {degree} exceeds the ceiling {ceiling}")]
    DegreeBlowup { degree: u32, ceiling: u32 },
    #[error("pivot submatrix is singular")]
    SingularPivot,
    #[error("matrix rank {rank} is below the requested {target}")]
    RankDeficient { rank: usize, target: usize },
    #[error("budget exceeded: {needed} work units requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimsMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("dimension estimates did not stabilise: {0:?}")]
    Unstable(Vec<u32>),
    #[error("no usable kernel point besides the origin")]
    NoPoint,
    #[error("every candidate point failed ({} tried)", .0.len())]
    AllCandidatesFailed(Vec<String>),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
