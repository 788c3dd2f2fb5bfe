use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("root index {index} out of range 1..={n_roots}")]
    RootIndex { index: i64, n_roots: u32 },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("truncation mismatch: {0}")]
    Truncation(String),
    #[error("non-invertible element: {0}")]
    NotInvertible(String),
    #[error("numeric backend unsupported for (N={n_roots}, p={p}): N must divide p-1")]
    UnsupportedBackend { n_roots: u32, p: u64 },
    #[error("p={p} divides a denominator of {value}")]
    PDividesDenominator { p: u64, value: String },
    #[error("not a unit mod {p}: {value}")]
    NotAUnit { p: u64, value: String },
    #[error("index must be positive, got {0}")]
    NonPositiveIndex(i64),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("coefficient at {word} does not stabilize: tail {tail:?}")]
    NotStabilized { word: String, tail: Vec<String> },
    #[error("precision: {0}")]
    Precision(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
