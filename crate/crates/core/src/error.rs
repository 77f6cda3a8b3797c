use thiserror::Error;

/// Errors raised by the algebraic kernels and the enumeration harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars live in different towers ({0} vs {1})")]
    TowerMismatch(String, String),
    #[error("element {0} is a zero divisor in its tower")]
    ZeroDivisor(String),
    #[error("tower has no square root of {0}")]
    MissingSqrt(u64),
    #[error("insufficient ghost precision: need {needed}, have {available}")]
    Precision { needed: usize, available: usize },
    #[error("not invertible: a ghost component vanishes (index {0})")]
    NotInvertible(usize),
    #[error("constant term violation: {0}")]
    ConstantTerm(String),
    #[error("plethysm requires rational coefficients on the outer function")]
    NotRational,
    #[error("degree cap {cap} too small, need {needed}")]
    Cap { needed: usize, cap: usize },
    #[error("unknown orbit index {0}")]
    UnknownOrbit(usize),
    #[error("empty domain: {0}")]
    Empty(String),
    #[error("state space of size {size} exceeds budget {budget}")]
    Budget { size: String, budget: String },
    #[error("input is not squarefree")]
    NotSquarefree,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
