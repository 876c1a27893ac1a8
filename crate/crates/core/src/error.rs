use alloc::string::String;

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("linear form vanishes identically")]
    ZeroForm,
    #[error("Euler class has a pole: zero weight with multiplicity {0}")]
    PoleAtZeroWeight(i64),
    #[error("every evaluation point hit a denominator zero after {0} attempts")]
    EvalDegenerate(usize),
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("series divisor has a non-unit constant term")]
    NonUnitDivisor,
    #[error("substituting m = lam3 annihilates a denominator factor")]
    PoleAtSubstitution,
    #[error("sign search over {points} points exceeds the cap of {cap}")]
    CapExceeded { points: usize, cap: usize },
    #[error("representation is not graded multiplicity-free: {0}")]
    NotMultiplicityFree(String),
    #[error("matrix shape does not match the dimension vector: {0}")]
    ShapeMismatch(String),
    #[error("theta lies on the line theta0 + theta1 = 0")]
    ThetaOnInfiniteWall,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
