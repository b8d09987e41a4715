use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown operator token {token:?} at byte {offset}")]
    UnknownOperator { offset: usize, token: String },
    #[error("address {0} leaves the term")]
    AddressOutOfRange(String),
    #[error("right vine index must be at least 1")]
    InvalidVine,
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("law {0:?} is not balanced")]
    UnbalancedLaw(String),
    #[error("term has a leaf other than x1: {0}")]
    InvalidLeaf(String),
    #[error("operator is undefined on {0}")]
    UndefinedAction(String),
    #[error("validation failed: {0}")]
    ValidationFailure(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
