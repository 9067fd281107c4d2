use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid field configuration: {0}")]
    InvalidConfig(String),

    #[error("sqrt({0}) is not in the working field (adjoin it first)")]
    UnknownRadical(i64),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("degree {0} is too low: forms must have degree at least 3")]
    DegreeTooLow(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("form is degenerate: slicing rank {rank} < {n} variables")]
    Degenerate { rank: usize, n: usize },

    #[error("span of center basis is not closed under multiplication")]
    NotClosed,

    #[error("matrix is not square")]
    NotSquare,

    #[error("matrix is singular")]
    Singular,

    #[error("tensor has non-real entries")]
    NotReal,

    #[error("scalar does not belong to the working field: {0}")]
    FieldMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
