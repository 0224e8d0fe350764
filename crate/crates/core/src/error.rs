use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} needs {needed} tuples, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("group is not in invariant-factor form: {0:?}")]
    NotInvariantFactor(Vec<u64>),

    #[error("asymmetric diagram: q~({i},{j}) = {a} but q~({j},{i}) = {b}")]
    AsymmetricDiagram {
        i: usize,
        j: usize,
        a: String,
        b: String,
    },

    #[error("rank {rank} exceeds the bound {bound}")]
    RankTooLarge { rank: usize, bound: usize },

    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("no cohomology class found")]
    NoClassFound,

    #[error("integer overflow: {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
