use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact polynomial division, remainder {0}")]
    InexactDivision(String),
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("prime must be odd, got {0}")]
    EvenPrime(u64),
    #[error("parse error at offset {pos} in {input:?}: {msg}")]
    Parse {
        input: String,
        pos: usize,
        msg: String,
    },
    #[error("table {table}, line {line}, column {column}: {msg}")]
    Schema {
        table: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("checksum mismatch for {0}")]
    Checksum(String),
    #[error("unknown table {0}")]
    UnknownTable(String),
    #[error("cyclic-defect or non-dividing case")]
    NotHeckeCase,
    #[error("corollary requires good prime")]
    BadPrime,
    #[error("relation references {0}, which is not in the basic set")]
    NotInBasicSet(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("inconsistent bounds for {0}: lo > hi")]
    Inconsistent(String),
    #[error("{0}")]
    Invalid(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
