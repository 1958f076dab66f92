use thiserror::Error;

/// Errors produced by the burning-number machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("symbol {symbol} out of range 1..={q}")]
    SymbolOutOfRange { symbol: usize, q: usize },

    #[error("enumeration needs {needed} vertices but the cap is {cap}")]
    Capacity { needed: u128, cap: u64 },

    #[error("block {block} is not a color vector")]
    NotACodeword { block: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("direction does not move any floating entry")]
    DegenerateDirection,

    /// An internal invariant failed. Never expected; indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
