//! Exhaustive ground truth over every labelled tree on `n` vertices.
//!
//! Trees are produced by decoding all `n^(n-2)` Prüfer words. Parallel runs
//! split the words by their first symbol and merge integer tallies by
//! addition, so results do not depend on the worker count.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{MomentError, OracleError};
use crate::iso::{labelled_rooted_count, rooted_isomorphic, RootedPattern};
use crate::moments::{self, PairRelation, Rational};
use crate::pattern::{count_patterns, is_pattern, PatternOccurrence};
use crate::tree::{decode_into, RootedTree, Tree};

/// Default largest `n` accepted by the enumerators.
pub const DEFAULT_CAP: usize = 9;
/// No cap may be configured above this.
pub const HARD_CAP: usize = 10;
/// Largest pattern size accepted by [`verify_labelled_rooted_count`].
pub const LABELLED_COUNT_CAP: usize = 7;

fn check_cap(n: usize, cap: usize) -> Result<(), OracleError> {
    if n < 2 {
        return Err(OracleError::TooSmall(n));
    }
    let cap = cap.min(HARD_CAP);
    if n > cap {
        return Err(OracleError::CapExceeded { n, cap });
    }
    Ok(())
}

/// Visits the decode of every word in `{1..n}^(n-2)` that starts with `prefix`,
/// in lexicographic order.
fn for_each_with_prefix(n: usize, prefix: &[usize], mut visit: impl FnMut(&Tree)) -> u64 {
    let len = n - 2;
    let mut word = vec![1; len];
    word[..prefix.len()].copy_from_slice(prefix);
    let mut degree = vec![0; n + 1];
    let mut edges = Vec::with_capacity(n - 1);
    let mut visited = 0;
    loop {
        decode_into(n, &word, &mut degree, &mut edges);
        visit(&Tree::from_edges_unchecked(n, edges.iter().copied()));
        visited += 1;
        // odometer over the free positions, last position fastest
        let mut pos = len;
        loop {
            if pos == prefix.len() {
                return visited;
            }
            pos -= 1;
            if word[pos] < n {
                word[pos] += 1;
                break;
            }
            word[pos] = 1;
        }
    }
}

/// Calls `visitor` once per labelled tree on `n` vertices in Prüfer word
/// order and returns the number of trees visited.
pub fn enumerate_trees(n: usize, visitor: impl FnMut(&Tree)) -> Result<u64, OracleError> {
    enumerate_trees_with_cap(n, DEFAULT_CAP, visitor)
}

pub fn enumerate_trees_with_cap(
    n: usize,
    cap: usize,
    visitor: impl FnMut(&Tree),
) -> Result<u64, OracleError> {
    check_cap(n, cap)?;
    Ok(for_each_with_prefix(n, &[], visitor))
}

/// Folds over all trees on `n` vertices, split by first Prüfer symbol across
/// `workers` threads. `merge` must be commutative and associative.
pub fn fold_trees<A, I, V, M>(
    n: usize,
    cap: usize,
    workers: usize,
    init: I,
    visit: V,
    merge: M,
) -> Result<A, OracleError>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &Tree) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    check_cap(n, cap)?;
    let part = |prefix: &[usize]| {
        let mut acc = init();
        for_each_with_prefix(n, prefix, |t| visit(&mut acc, t));
        acc
    };
    if n == 2 {
        return Ok(part(&[]));
    }
    if workers <= 1 {
        return Ok((1..=n).map(|s| part(&[s])).fold(init(), &merge));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    Ok(pool.install(|| {
        (1..=n)
            .into_par_iter()
            .map(|s| part(&[s]))
            .reduce(&init, &merge)
    }))
}

/// Full law of `P_n` under the uniform measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    pub n: usize,
    pub p: usize,
    /// Canonical code of the pattern.
    pub pattern: String,
    /// Pattern count value mapped to the number of trees attaining it.
    pub histogram: BTreeMap<usize, BigUint>,
    pub total: BigUint,
}

impl ExactDistribution {
    fn moment(&self, k: u32) -> Rational {
        let sum: BigUint = self
            .histogram
            .iter()
            .map(|(&v, c)| BigUint::from(v).pow(k) * c)
            .sum();
        BigRational::new(sum.into(), self.total.clone().into())
    }

    pub fn mean(&self) -> Rational {
        self.moment(1)
    }

    pub fn second_moment(&self) -> Rational {
        self.moment(2)
    }

    pub fn prob_zero(&self) -> Rational {
        let zero = self.histogram.get(&0).cloned().unwrap_or_default();
        BigRational::new(zero.into(), self.total.clone().into())
    }

    pub fn prob_at_least_one(&self) -> Rational {
        Rational::from_integer(1.into()) - self.prob_zero()
    }
}

#[derive(Clone, Default)]
struct Histograms(Vec<BTreeMap<usize, u64>>);

impl Histograms {
    fn merge(mut self, other: Self) -> Self {
        if self.0.is_empty() {
            return other;
        }
        for (mine, theirs) in self.0.iter_mut().zip(other.0) {
            for (k, c) in theirs {
                *mine.entry(k).or_default() += c;
            }
        }
        self
    }
}

/// Distribution of the count of each pattern, sharing one pass over the trees.
pub fn exact_pattern_distributions(
    n: usize,
    patterns: &[RootedPattern],
    workers: usize,
) -> Result<Vec<ExactDistribution>, OracleError> {
    let hist = fold_trees(
        n,
        DEFAULT_CAP,
        workers,
        || Histograms(vec![BTreeMap::new(); patterns.len()]),
        |acc, t| {
            for (h, pat) in acc.0.iter_mut().zip(patterns) {
                *h.entry(count_patterns(t, pat)).or_default() += 1;
            }
        },
        Histograms::merge,
    )?;
    let total = BigUint::from(n).pow(n as u32 - 2);
    Ok(hist
        .0
        .into_iter()
        .zip(patterns)
        .map(|(h, pat)| ExactDistribution {
            n,
            p: pat.p(),
            pattern: pat.canonical().to_string(),
            histogram: h.into_iter().map(|(k, c)| (k, BigUint::from(c))).collect(),
            total: total.clone(),
        })
        .collect())
}

pub fn exact_pattern_distribution(n: usize, pat: &RootedPattern) -> Result<ExactDistribution, OracleError> {
    Ok(exact_pattern_distributions(n, std::slice::from_ref(pat), 1)?.remove(0))
}

/// Counted against the closed form `p! / #Aut(v, P)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelledCountReport {
    pub enumerated: u64,
    pub formula: u64,
    pub equal: bool,
}

/// Counts labelled trees on `p + 1` labels that, rooted at label 1, are
/// isomorphic to the pattern, and compares with `labelled_rooted_count`.
pub fn verify_labelled_rooted_count(pat: &RootedPattern) -> Result<LabelledCountReport, OracleError> {
    let size = pat.p() + 1;
    if size > LABELLED_COUNT_CAP {
        return Err(OracleError::CapExceeded { n: size, cap: LABELLED_COUNT_CAP });
    }
    let mut enumerated = 0;
    enumerate_trees_with_cap(size, LABELLED_COUNT_CAP, |t| {
        let rooted = RootedTree::new(t.clone(), 1).expect("label 1 exists");
        if rooted_isomorphic(&rooted, pat.shape()) {
            enumerated += 1;
        }
    })?;
    let formula = labelled_rooted_count(pat)
        .to_u64()
        .expect("p! fits in u64 for p < 7");
    Ok(LabelledCountReport {
        enumerated,
        formula,
        equal: enumerated == formula,
    })
}

/// Verdict of one oracle-versus-formula comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Equal,
    Unequal,
    /// An inequality check that holds.
    Holds,
    Violated,
    DomainTooSmall,
}

impl Outcome {
    pub fn passed(self) -> bool {
        !matches!(self, Outcome::Unequal | Outcome::Violated)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Equal => "equal",
            Outcome::Unequal => "UNEQUAL",
            Outcome::Holds => "holds",
            Outcome::Violated => "VIOLATED",
            Outcome::DomainTooSmall => "domain too small",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub oracle: Rational,
    pub formula: Option<Rational>,
    pub outcome: Outcome,
}

impl Check {
    fn equality(name: &'static str, oracle: Rational, formula: Result<Rational, MomentError>) -> Self {
        match formula {
            Ok(f) => Check {
                name,
                outcome: if f == oracle { Outcome::Equal } else { Outcome::Unequal },
                oracle,
                formula: Some(f),
            },
            Err(_) => Check {
                name,
                oracle,
                formula: None,
                outcome: Outcome::DomainTooSmall,
            },
        }
    }

    /// `oracle <= bound`.
    fn upper_bound(name: &'static str, oracle: Rational, bound: Result<Rational, MomentError>) -> Self {
        match bound {
            Ok(b) => Check {
                name,
                outcome: if oracle <= b { Outcome::Holds } else { Outcome::Violated },
                oracle,
                formula: Some(b),
            },
            Err(_) => Check {
                name,
                oracle,
                formula: None,
                outcome: Outcome::DomainTooSmall,
            },
        }
    }
}

/// Every comparison made at one `(pattern, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVerification {
    pub n: usize,
    pub p: usize,
    pub checks: Vec<Check>,
}

impl MomentVerification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome.passed())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Fixed index tuples used for the single and pair indicator checks; a
/// tuple is `None` when its labels do not fit in `1..=n`.
pub fn fixed_tuples(p: usize, n: usize) -> FixedTuples {
    let first = PatternOccurrence::new(1, (2..=p + 1).collect());
    let fits = |occ: &PatternOccurrence| occ.vertices().all(|v| v <= n);
    let disjoint = PatternOccurrence::new(p + 2, (p + 3..=2 * p + 2).collect());
    let same_root = PatternOccurrence::new(1, (3..=p + 2).collect());
    let mut crossed_others = vec![1];
    crossed_others.extend(p + 2..=2 * p);
    let crossed = PatternOccurrence::new(2, crossed_others);
    FixedTuples {
        disjoint: fits(&disjoint).then_some(disjoint),
        same_root_other_set: fits(&same_root).then_some(same_root),
        crossed_roots: fits(&crossed).then_some(crossed),
        first: fits(&first).then_some(first),
    }
}

/// `first = (1; 2..p+1)`, `disjoint = (p+2; p+3..2p+2)`,
/// `same_root_other_set = (1; 3..p+2)`, `crossed_roots = (2; 1, p+2..2p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedTuples {
    pub first: Option<PatternOccurrence>,
    pub disjoint: Option<PatternOccurrence>,
    pub same_root_other_set: Option<PatternOccurrence>,
    pub crossed_roots: Option<PatternOccurrence>,
}

#[derive(Clone, Default)]
struct Tally {
    histogram: BTreeMap<usize, u64>,
    first: u64,
    both_disjoint: u64,
    both_same_root: u64,
    both_crossed: u64,
}

impl Tally {
    fn merge(mut self, other: Self) -> Self {
        for (k, c) in other.histogram {
            *self.histogram.entry(k).or_default() += c;
        }
        self.first += other.first;
        self.both_disjoint += other.both_disjoint;
        self.both_same_root += other.both_same_root;
        self.both_crossed += other.both_crossed;
        self
    }
}

/// Compares every closed form against exhaustive enumeration at one `n`.
///
/// Check names: `gamma`, `mean`, `pair_all_distinct`, `pair_same_root_same_set`,
/// `pair_same_root_other_set`, `pair_crossed_roots`, `second_moment`,
/// `chebyshev`.
pub fn verify_moment_formulas(
    pat: &RootedPattern,
    n: usize,
    workers: usize,
) -> Result<MomentVerification, OracleError> {
    let p = pat.p();
    let tuples = fixed_tuples(p, n);
    let holds = |t: &Tree, occ: &Option<PatternOccurrence>| {
        occ.as_ref()
            .is_some_and(|o| is_pattern(t, o, pat).expect("tuple fits in the tree"))
    };
    let tally = fold_trees(
        n,
        DEFAULT_CAP,
        workers,
        Tally::default,
        |acc, t| {
            *acc.histogram.entry(count_patterns(t, pat)).or_default() += 1;
            if holds(t, &tuples.first) {
                acc.first += 1;
                acc.both_disjoint += u64::from(holds(t, &tuples.disjoint));
                acc.both_same_root += u64::from(holds(t, &tuples.same_root_other_set));
                acc.both_crossed += u64::from(holds(t, &tuples.crossed_roots));
            }
        },
        Tally::merge,
    )?;

    let total = BigInt::from(n).pow(n as u32 - 2);
    let frac = |count: u64| BigRational::new(count.into(), total.clone());
    let dist = ExactDistribution {
        n,
        p,
        pattern: pat.canonical().to_string(),
        histogram: tally.histogram.into_iter().map(|(k, c)| (k, BigUint::from(c))).collect(),
        total: total.to_biguint().expect("positive"),
    };

    let mut checks = vec![
        Check::equality("gamma", frac(tally.first), moments::gamma_expectation(pat, n, false)),
        Check::equality("mean", dist.mean(), moments::mean_pattern_count(pat, n)),
    ];
    let pair = |name, count, present: bool, relation| {
        let formula = if present {
            moments::pair_gamma_expectation(pat, n, relation)
        } else {
            Err(MomentError::DomainTooSmall { n, min: 2 * p + 2 })
        };
        Check::equality(name, frac(count), formula)
    };
    checks.push(pair(
        "pair_all_distinct",
        tally.both_disjoint,
        tuples.disjoint.is_some(),
        PairRelation::AllDistinct,
    ));
    checks.push(pair(
        "pair_same_root_same_set",
        tally.first,
        tuples.first.is_some(),
        PairRelation::SameRootSameSet,
    ));
    checks.push(pair(
        "pair_same_root_other_set",
        tally.both_same_root,
        tuples.same_root_other_set.is_some(),
        PairRelation::Other,
    ));
    checks.push(pair(
        "pair_crossed_roots",
        tally.both_crossed,
        tuples.crossed_roots.is_some(),
        PairRelation::Other,
    ));
    checks.push(Check::equality(
        "second_moment",
        dist.second_moment(),
        moments::second_moment_pattern_count(pat, n),
    ));
    checks.push(Check::upper_bound(
        "chebyshev",
        dist.prob_zero(),
        moments::chebyshev_zero_bound(pat, n),
    ));
    Ok(MomentVerification { n, p, checks })
}

/// One representative per rooted-isomorphism class of rooted trees on
/// `size` vertices, found by rooting every labelled tree at every vertex.
pub fn rooted_shapes(size: usize) -> Vec<RootedTree> {
    if size == 1 {
        return vec![RootedTree::new(Tree::singleton(), 1).expect("vertex 1")];
    }
    let mut classes = BTreeMap::new();
    enumerate_trees_with_cap(size, HARD_CAP, |t| {
        for root in 1..=size {
            let rooted = RootedTree::new(t.clone(), root).expect("valid root");
            classes
                .entry(crate::iso::canonical_form_rooted(&rooted))
                .or_insert(rooted);
        }
    })
    .expect("size within cap");
    classes.into_values().collect()
}

/// Every rooted pattern with `2 <= p + 1 <= max_size` vertices.
pub fn all_patterns(max_size: usize) -> Vec<RootedPattern> {
    (2..=max_size)
        .flat_map(rooted_shapes)
        .map(|s| RootedPattern::new(s).expect("at least two vertices"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn pat(name: &str) -> RootedPattern {
        RootedPattern::named(name).unwrap()
    }

    fn q(num: i64, den: i64) -> Rational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn enumeration_counts_follow_cayley() {
        for (n, expected) in [(2, 1), (3, 3), (4, 16), (5, 125)] {
            let mut seen = HashSet::new();
            let visited = enumerate_trees(n, |t| {
                seen.insert(t.clone());
            })
            .unwrap();
            assert_eq!(visited, expected);
            assert_eq!(seen.len() as u64, expected, "duplicates at n = {n}");
        }
    }

    #[test]
    fn enumeration_is_in_word_order() {
        let mut words = Vec::new();
        enumerate_trees(4, |t| words.push(crate::tree::prufer_encode(t).unwrap().as_slice().to_vec())).unwrap();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(words, sorted);
        assert_eq!(words[0], vec![1, 1]);
    }

    #[test]
    fn enumeration_caps() {
        assert_eq!(
            enumerate_trees(10, |_| {}),
            Err(OracleError::CapExceeded { n: 10, cap: 9 })
        );
        assert_eq!(
            enumerate_trees_with_cap(11, 50, |_| {}),
            Err(OracleError::CapExceeded { n: 11, cap: 10 })
        );
        assert_eq!(enumerate_trees(1, |_| {}), Err(OracleError::TooSmall(1)));
    }

    #[test]
    fn parallel_fold_matches_sequential() {
        let count = |workers| {
            fold_trees(6, DEFAULT_CAP, workers, || 0u64, |acc, t| *acc += t.degree(1) as u64, |a, b| a + b).unwrap()
        };
        assert_eq!(count(1), count(3));
    }

    #[test]
    fn distributions() {
        let d = exact_pattern_distribution(3, &pat("edge")).unwrap();
        assert_eq!(d.histogram, BTreeMap::from([(2, BigUint::from(3u32))]));

        let d = exact_pattern_distribution(4, &pat("path4@end")).unwrap();
        assert_eq!(d.histogram, BTreeMap::from([(0, BigUint::from(16u32))]));

        let d = exact_pattern_distribution(5, &pat("cherry")).unwrap();
        assert_eq!(d.mean(), q(12, 25));
        let total: BigUint = d.histogram.values().sum();
        assert_eq!(total, d.total);
    }

    #[test]
    fn labelled_count_reports() {
        for (name, count) in [("cherry", 1), ("path3@end", 2), ("edge", 1)] {
            assert_eq!(
                verify_labelled_rooted_count(&pat(name)).unwrap(),
                LabelledCountReport { enumerated: count, formula: count, equal: true }
            );
        }
        assert!(verify_labelled_rooted_count(&pat("path8@end")).is_err());
    }

    #[test]
    fn moment_verification_edge_n4() {
        let v = verify_moment_formulas(&pat("edge"), 4, 1).unwrap();
        assert!(v.passed());
        assert_eq!(v.check("mean").unwrap().oracle, q(3, 2));
        assert_eq!(v.check("second_moment").unwrap().oracle, q(3, 1));
        assert_eq!(v.check("pair_all_distinct").unwrap().oracle, q(1, 16));
        let cheb = v.check("chebyshev").unwrap();
        assert_eq!((cheb.oracle.clone(), cheb.formula.clone()), (q(1, 4), Some(q(1, 3))));
        assert_eq!(cheb.outcome, Outcome::Holds);
    }

    #[test]
    fn moment_verification_cherry() {
        let v = verify_moment_formulas(&pat("cherry"), 6, 2).unwrap();
        assert!(v.passed());
        assert_eq!(v.check("mean").unwrap().oracle, q(5, 12));
        assert_eq!(v.check("second_moment").unwrap().oracle, q(5, 9));

        let v = verify_moment_formulas(&pat("cherry"), 5, 1).unwrap();
        assert_eq!(v.check("mean").unwrap().outcome, Outcome::Equal);
        assert_eq!(v.check("second_moment").unwrap().outcome, Outcome::DomainTooSmall);
        assert!(v.passed());
    }

    #[test]
    fn shapes_per_size() {
        // rooted unlabelled trees: 1, 1, 2, 4, 9, 20
        let counts: Vec<usize> = (1..=6).map(|s| rooted_shapes(s).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20]);
        assert_eq!(all_patterns(4).len(), 7);
    }
}
