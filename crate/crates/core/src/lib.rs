//! Patterns in uniform random labelled trees.
//!
//! A pattern is a rooted tree `(v, P)` on `p + 1` vertices; it occurs in a host
//! tree when a copy of it hangs off the rest of the host by a single edge at
//! its root. This crate counts occurrences, evaluates the exact mean and
//! second moment of the occurrence count over all `n^(n-2)` labelled trees,
//! checks those closed forms against exhaustive enumeration, and estimates
//! the probability that a random tree contains the pattern by Monte Carlo.

pub mod error;
pub mod iso;
pub mod moments;
pub mod montecarlo;
pub mod oracle;
pub mod pattern;
pub mod tree;

pub use error::{McError, MomentError, OracleError, PatternError, TreeError};
pub use iso::{
    aut_rooted, aut_unrooted, canonical_form_rooted, labelled_rooted_count, rooted_isomorphic,
    CanonicalForm, RootedPattern,
};
pub use moments::{MomentReport, PairRelation, Rational};
pub use montecarlo::{estimate_pattern_stats, sample_tree, McEstimate, SplitMix64};
pub use pattern::{count_patterns, find_patterns, is_pattern, PatternOccurrence};
pub use tree::{
    prufer_decode, prufer_encode, rootify, tree_center, CenterResult, PruferSequence, RootedTree,
    Tree,
};
