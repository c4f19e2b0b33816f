use thiserror::Error;

use crate::lisp::{SExpr, SymId};

/// Everything that can interrupt evaluation.
///
/// `Go` and `Return` are non-local transfers used by PROG; they only become
/// user-visible errors when no enclosing PROG catches them.
#[derive(Debug, Clone, Error)]
pub enum LispError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("undefined function {0}")]
    Undefined(String),
    #[error("{name} called with {got} arguments, expected {expected}")]
    Arity {
        name: String,
        got: usize,
        expected: String,
    },
    #[error("{0}")]
    Type(String),
    #[error("division by zero")]
    DivZero,
    #[error("read error at line {line}: {msg}")]
    Read { line: usize, msg: String },
    #[error("incomplete input")]
    Incomplete,
    #[error("GO to missing label {name}")]
    Go { label: SymId, name: String },
    #[error("RETURN outside PROG")]
    Return(SExpr),
    #[error("recursion too deep")]
    Depth,
    #[error("storage budget of {0} bytes exhausted")]
    Storage(usize),
    #[error("{0}")]
    User(String),
    #[error("{0}")]
    Alg(String),
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, LispError>;

pub(crate) fn alg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(LispError::Alg(msg.into()))
}
