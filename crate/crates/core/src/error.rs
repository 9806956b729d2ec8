use std::io;

use thiserror::Error;

/// Errors raised by the domain generator and its supporting algebra.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported number of alternatives {0} (expected {min}..={max})", min = crate::MIN_ALTERNATIVES, max = crate::MAX_ALTERNATIVES)]
    AlternativeCount(usize),

    #[error("invalid triple ({a},{b},{c}) for n={n}: expected 1 <= a < b < c <= n")]
    InvalidTriple { a: u8, b: u8, c: u8, n: usize },

    #[error("triple index {index} out of range for n={n} ({count} triples)")]
    TripleIndex { index: usize, n: usize, count: usize },

    #[error("invalid condition code {0} (expected 0 for unassigned or 1..=6)")]
    InvalidCode(u8),

    #[error("unknown never condition '{0}' (valid: 1N2, 1N3, 2N1, 2N3, 3N1, 3N2)")]
    UnknownCondition(String),

    #[error("rule set must contain at least one never condition")]
    EmptyRuleSet,

    #[error("invalid code string '{0}': {1}")]
    CodeString(String, &'static str),

    #[error("assignments over different alternative counts ({0} vs {1})")]
    CountMismatch(usize, usize),

    #[error("condition assignment is not complete ({unassigned} unassigned triples)")]
    Incomplete { unassigned: usize },

    #[error("domain is empty")]
    EmptyDomain,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid search prefix '{prefix}': {reason}")]
    InvalidPrefix { prefix: String, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("oracle refuses {count} assignments (bound is {bound})")]
    OracleTooLarge { count: u128, bound: u128 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
