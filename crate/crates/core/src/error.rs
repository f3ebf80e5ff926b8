use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("numerator not divisible by h: {0}")]
    NotDivisible(String),
    #[error("series constant term is not the unit")]
    NonUnitConstant,
    #[error("unknown Cartan type {0}{1}")]
    UnknownType(String, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("singular linear system while solving for A-series at order {0}")]
    Singular(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
