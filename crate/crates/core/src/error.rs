use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input word: {0}")]
    InvalidWord(String),

    #[error("invalid type profile: {0}")]
    InvalidProfile(String),

    #[error("invalid row-array: {0}")]
    InvalidRowArray(String),

    #[error("profiles are for different N ({left} vs {right})")]
    MismatchedN { left: usize, right: usize },

    #[error("invalid symmetric function: {0}")]
    InvalidFunction(String),

    #[error("function is not symmetric: words {first:?} and {second:?} share a type but differ in value")]
    NotSymmetric { first: Vec<u32>, second: Vec<u32> },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function has no 1-type/0-type pair")]
    ConstantFunction,

    #[error("no fresh slot with a_j = b_j = 0 at level {level}")]
    NoFreshSlot { level: usize },

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("set-equality promise violated: {0}")]
    PromiseViolation(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("polynomial leaves [0,1] at vertex {vertex}: value {value}")]
    OutOfRange { vertex: usize, value: f64 },
}
