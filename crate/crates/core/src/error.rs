use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("zero exponent at line {line}, column {column}")]
    ZeroExponent { line: usize, column: usize },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("coset enumeration exceeded the limit of {limit} cosets")]
    CosetLimitExceeded { limit: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("division is not exact")]
    DivisionNotExact,
    #[error("group has no surjection onto Z (first Betti number is zero)")]
    NoFreeAbelianisation,
    #[error("polynomial parse error: {0}")]
    PolyParse(String),
    #[error("certificate error: {0}")]
    Certificate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
