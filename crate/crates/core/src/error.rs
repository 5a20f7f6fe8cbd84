use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undeclared {kind} `{name}`")]
    Undeclared { kind: &'static str, name: String },
    #[error("lag {lag} of `{stream}` exceeds lookback {lookback}")]
    LagExceeded { stream: String, lag: usize, lookback: usize },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("not in the structure's signature: {0}")]
    Signature(String),
    #[error("malformed element: {0}")]
    MalformedElement(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
