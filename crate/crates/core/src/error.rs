use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    BadPerm(String),

    #[error("cycle notation parse error: {0}")]
    BadCycles(String),

    #[error("not a valid group table: {0}")]
    BadTable(String),

    #[error("group order {order} exceeds cap {cap}")]
    OrderExceedsCap { order: u64, cap: u64 },

    #[error("operation needs a multiplication table but none is available (order {order}, table cap {cap})")]
    NoTable { order: u64, cap: u64 },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("element sets belong to different groups")]
    OwnerMismatch,

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("class count {got} exceeds supported limit {cap}")]
    TooManyClasses { got: usize, cap: usize },

    #[error("action is not transitive")]
    NotTransitive,

    #[error("numeric search failed to converge: {0}")]
    NoConvergence(String),

    #[error("{0}")]
    Invalid(String),
}
