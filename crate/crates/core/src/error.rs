use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate symbol `{0}` in signature")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("algebras must have at least one element")]
    EmptyUniverse,
    #[error("table for `{symbol}`: {message}")]
    InvalidTable { symbol: String, message: String },
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("operation requires a generated presentation, `{0}` is axiomatic")]
    NotGenerated(String),
    #[error("product of size {size} exceeds the product cap {cap}")]
    ProductCapExceeded { size: usize, cap: usize },
    #[error("bound {bound} exceeds the configured cap {cap}")]
    BoundExceedsCap { bound: usize, cap: usize },
    #[error("operation `{op}` is not functional at {tuple:?}: both {first} and {second} qualify")]
    NotFunctional {
        op: String,
        tuple: Vec<usize>,
        first: usize,
        second: usize,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
}
