use thiserror::Error;

use crate::ledger::AccountId;

/// A configuration value violated one of its constraints.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid `{key}`: expected {constraint}")]
pub struct ValidationError {
    pub key: String,
    pub constraint: String,
}

impl ValidationError {
    pub fn new(key: impl Into<String>, constraint: impl Into<String>) -> Self {
        ValidationError {
            key: key.into(),
            constraint: constraint.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("ledger has collapsed")]
    LedgerCollapsed,
    #[error("unknown account {0}")]
    UnknownAccount(AccountId),
    #[error("account {account} holds {balance}, needs {needed}")]
    InsufficientBalance {
        account: AccountId,
        balance: u64,
        needed: u64,
    },
    #[error("no theft event with sequence number {0}")]
    EventNotFound(u64),
    #[error("theft event {0} has already been rewritten")]
    AlreadyRewritten(u64),
    #[error("account {0} already exists")]
    DuplicateAccount(AccountId),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PoolError {
    #[error("pool reserves must be positive")]
    EmptyPool,
    #[error("invalid amount {0}")]
    InvalidAmount(f64),
    #[error("swap output {out} below minimum {min_out}")]
    SlippageExceeded { out: f64, min_out: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error("simulation has terminated: ledger collapsed at cycle {0}")]
    Terminated(u64),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}
