//! Pattern-avoiding permutations and the completion bijection between
//! 132-avoiding permutations of length `n` and 132-avoiding alternating
//! permutations of length `2n + 1`.
//!
//! * [`perm`]: permutations, parsing, standardization, containment.
//! * [`tree`]: decreasing binary trees, completion, canonical labeling.
//! * [`bijection`]: the bijection, its inverse, q-pattern validity, parity reduction.
//! * [`enumerate`]: class generators, counters and closed-form oracles.
//! * [`verify`]: the claim catalog and its reports.

pub mod bijection;
pub mod enumerate;
pub mod error;
pub mod perm;
pub mod tree;
pub mod verify;

pub use bijection::{
    corollary_q, grow_even_to_odd, phi, phi_inverse, phi_pattern, reduce_pattern_for_even,
    shrink_odd_to_even, validate_q, CorollaryFamily, PatternPair,
};
pub use enumerate::{Guards, SequenceSpec};
pub use error::{Error, ParseError, Result};
pub use perm::{parse_permutation, standardize, Occurrence, Pattern, Permutation};
pub use tree::{BinaryTree, LabeledBinaryTree};
pub use verify::{run_all, run_suite, ClaimReport, Suite, VerifyConfig, Witness};
