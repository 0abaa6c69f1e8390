use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("negative part {part} in q-multinomial {parts:?}")]
    NegativePart { parts: Vec<i64>, part: i64 },
    #[error("operands live in different quantum tori")]
    MismatchedForms,
    #[error("not a Motzkin path: step {step} goes from {from} to {to}")]
    InvalidPath { step: usize, from: i64, to: i64 },
    #[error("invalid path: {0}")]
    MalformedPath(String),
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("target {0} is not reachable from the fundamental seed by case (i)/(ii) mutations")]
    UnreachableTarget(String),
    #[error("mutation at {index} does not match case {expected}")]
    CaseMismatch { index: usize, expected: String },
    #[error("expected a unit monomial, got {0}")]
    NonMonomial(String),
    #[error("commutation exponent {exponent} between y_{i} and y_{j} is not a multiple of {base}")]
    ExponentNotMultiple { i: usize, j: usize, exponent: i64, base: i64 },
    #[error("series constant term is not the identity: {0}")]
    ConstantTermNotIdentity(String),
    #[error("continued-fraction forms disagree at t^{degree}")]
    FractionMismatch { degree: usize },
    #[error("R_{{{row},{time}}} is outside the computed window")]
    WindowTooSmall { row: usize, time: i64 },
    #[error("Q-system step failed at R_{{{row},{time}}}: {detail}")]
    DivisionFailure { row: usize, time: i64, detail: String },
}
