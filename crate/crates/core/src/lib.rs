//! Isomorph-free generation of Condorcet domains.
//!
//! A unitary Condorcet domain on `[n]` is described by a complete set of
//! never conditions: one condition `iNj` (`i != j`) on every triple of
//! alternatives. This crate enumerates such sets up to relabeling of the
//! alternatives with an orderly depth-first search, keeping only the
//! lexicographically largest member of each isomorphism class, and provides
//! the algebra around it:
//!
//! - [`triple`], [`condition`], [`order`]: triples in co-lex order, the six
//!   never conditions, linear orders and their restrictions to triples.
//! - [`lexcode`]: code strings and their lexicographic order.
//! - [`iso`]: relabelings and the maximality tests.
//! - [`search`]: the generator, with resumable and parallel runs.
//! - [`domain`]: expansion to full domains, copiousness, maximality, histograms.
//! - [`oracle`]: a brute-force reference used to validate the generator.

pub mod condition;
pub mod domain;
pub mod error;
pub mod iso;
pub mod lexcode;
pub mod oracle;
pub mod order;
pub mod search;
pub mod triple;

pub use condition::{FormalCondition, NeverCondition, Pattern, RuleSet};
pub use domain::{
    domain_size, expand, histogram, is_copious, is_maximal, is_unitary, satisfied_conditions,
    Domain, SizeHistogram,
};
pub use error::{Error, Result};
pub use iso::{
    apply_to_triple, induced_condition, is_canonical_complete, is_partially_lex_max, transform,
    LexMaxTester, Permutation,
};
pub use lexcode::{lex_compare, ConditionAssignment};
pub use order::LinearOrder;
pub use search::{generate, generate_all, partition, resume, LeafSink, SearchConfig, SearchStats};
pub use triple::{triple_at, triple_count, triple_index, Triple};

/// An alternative, numbered from 1.
pub type Alternative = u8;

pub const MIN_ALTERNATIVES: usize = 3;

/// Upper limit on `n`; runs beyond 10 or so are impractical anyway.
pub const MAX_ALTERNATIVES: usize = 16;

/// The three rule pairs whose classes are tabulated for `n = 8`.
pub const PEAK_PIT_PAIRS: [&str; 3] = ["2N3,2N1", "1N3,3N1", "1N3,2N1"];

pub(crate) fn check_alternatives(n: usize) -> Result<()> {
    if (MIN_ALTERNATIVES..=MAX_ALTERNATIVES).contains(&n) {
        Ok(())
    } else {
        Err(Error::AlternativeCount(n))
    }
}
