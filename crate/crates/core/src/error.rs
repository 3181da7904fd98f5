use thiserror::Error;

use crate::partitions::Partition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("degree {requested} exceeds the degree cap {cap}")]
    DegreeCap { requested: usize, cap: usize },

    #[error("partitions {0} and {1} have different sizes")]
    SizeMismatch(Partition, Partition),

    #[error("{0} -> {1} is not a one-box cover")]
    NotACover(Partition, Partition),

    #[error("point is not in the simplex: {0}")]
    NotInSimplex(String),

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
