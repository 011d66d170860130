use thiserror::Error;

/// Errors raised by parsing, polynomial arithmetic and the criteria pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("lexical error at position {pos}: {msg}")]
    Lex { pos: usize, msg: String },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent overflow: {0}")]
    ExponentOverflow(String),
    #[error("invalid ring configuration: {0}")]
    InvalidConfig(String),
    #[error("variable-set mismatch between operands")]
    VariableMismatch,
    #[error("coefficient at monomial {monomial} is not divisible by p")]
    NotDivisible { monomial: String },
    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: u32, have: u32 },
    #[error("polynomial of degree {degree} exceeds the degree bound {bound}")]
    DegreeExceedsBound { degree: u32, bound: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not in the ghost image: index {index} fails the divisibility")]
    NotInGhostImage { index: usize },
    #[error("witt vector length or prime mismatch")]
    WittMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
