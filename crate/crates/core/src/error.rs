use thiserror::Error;

use crate::nft::StateId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("engine requires trimmed Nft")]
    NotTrimmed,
    #[error("state budget exceeded: more than {limit} alignment configurations")]
    BudgetExceeded { limit: usize },
    #[error("internal error: lag of length {len} at state {state} exceeds the shift bound {bound}")]
    LagOverflow { state: StateId, len: usize, bound: u64 },
    #[error("deviation value overflows 64 bits")]
    Overflow,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}
