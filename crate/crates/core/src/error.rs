use thiserror::Error;

use crate::perm::{Occurrence, Permutation};

/// Reasons a permutation string is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty token at position {0}")]
    EmptyToken(usize),
    #[error("malformed token {0:?}")]
    Malformed(String),
    #[error("value {0} is not positive")]
    NonPositive(i64),
    #[error("duplicate value {0}")]
    Duplicate(u32),
    #[error("values do not form 1..{n}: missing {missing}")]
    Gap { n: usize, missing: u32 },
    #[error("digit-string form only allowed up to length 9; use commas")]
    DigitsTooLong,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    Parse(#[from] ParseError),
    #[error("duplicate value {0} cannot be standardized")]
    DuplicateValue(i64),
    #[error("{perm} contains 132 at positions {occurrence}")]
    Contains132 {
        perm: Permutation,
        occurrence: Occurrence,
    },
    #[error("{0} is not alternating")]
    NotAlternating(Permutation),
    #[error("expected {expected} length, got {perm} of length {len}", len = perm.len())]
    WrongParity {
        perm: Permutation,
        expected: &'static str,
    },
    #[error("{0} does not end in 1")]
    MissingTrailingOne(Permutation),
    #[error("empty pattern not allowed here")]
    EmptyPattern,
    #[error("empty tree has no decreasing tree")]
    EmptyInput,
    #[error("tree labeling is not decreasing")]
    NotDecreasing,
    #[error("tree labels are not exactly 1..n")]
    BadLabels,
    #[error("tree is not complete")]
    NotComplete,
    #[error("{what} bound {requested} exceeds guard {limit}")]
    GuardExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    #[error("raising the {what} guard to {requested} (default {default}) requires acknowledgment")]
    GuardNotAcknowledged {
        what: &'static str,
        requested: usize,
        default: usize,
    },
    #[error("integer overflow computing {0}")]
    Overflow(String),
    #[error("{0}")]
    OutOfDomain(String),
    #[error("invalid pattern pair (p = {p}, q = {q})")]
    InvalidPair { p: Permutation, q: Permutation },
}

impl Error {
    /// True for resource-limit errors, which the CLI reports with their own exit status.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::GuardExceeded { .. } | Error::GuardNotAcknowledged { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
