//! Uniform sampling of labelled trees and Monte Carlo estimates of the
//! pattern count.
//!
//! Sample `k` of a run with seed `s` draws from its own SplitMix64 stream
//! started at `mix64(mix64(s) ^ k)`. Tallies are therefore a function of
//! `(pattern, n, samples, seed)` alone, however the indices are split
//! between workers.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::McError;
use crate::iso::RootedPattern;
use crate::moments::{self, Rational};
use crate::pattern::count_patterns;
use crate::tree::{decode_into, Tree};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Stream for sample `index` of a run seeded with `seed`.
    pub fn for_sample(seed: u64, index: u64) -> Self {
        Self::new(mix64(mix64(seed) ^ index))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `1..=n`, rejecting draws above the largest multiple of `n`.
    pub fn uniform_1_to(&mut self, n: usize) -> usize {
        assert!(n >= 1);
        let range = n as u64;
        let zone = (u64::MAX / range) * range;
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % range) as usize + 1;
            }
        }
    }
}

/// Draws a uniform labelled tree by decoding `n - 2` uniform symbols.
/// `n = 1` consumes no randomness.
pub fn sample_tree(n: usize, rng: &mut SplitMix64) -> Tree {
    assert!(n >= 1, "trees need a vertex");
    if n == 1 {
        return Tree::singleton();
    }
    let word: Vec<usize> = (0..n - 2).map(|_| rng.uniform_1_to(n)).collect();
    let mut degree = vec![0; n + 1];
    let mut edges = Vec::with_capacity(n - 1);
    decode_into(n, &word, &mut degree, &mut edges);
    Tree::from_edges_unchecked(n, edges)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    hits: u64,
    sum: u64,
    sum_sq: u128,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            hits: self.hits + o.hits,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }
}

/// Samples per work unit handed to the thread pool.
const BLOCK: u64 = 2048;

/// Monte Carlo tallies and derived estimates for one `(pattern, n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub hits_ge1: u64,
    pub sum_p: u64,
    pub sum_p2: u128,
    pub p_hat: f64,
    pub p_ci_low: f64,
    pub p_ci_high: f64,
    pub mean_hat: f64,
    pub stderr_mean: f64,
}

/// 97.5% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// 95% Wilson score interval for `hits` successes out of `trials`.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // clamp so that low <= p_hat <= high survives rounding at p in {0, 1}
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

impl McEstimate {
    fn from_tally(n: usize, samples: u64, seed: u64, t: Tally) -> Self {
        let count = samples as f64;
        let p_hat = t.hits as f64 / count;
        let (p_ci_low, p_ci_high) = wilson_interval(t.hits, samples);
        let mean_hat = t.sum as f64 / count;
        let var = if samples > 1 {
            ((t.sum_sq as f64 - count * mean_hat * mean_hat) / (count - 1.0)).max(0.0)
        } else {
            0.0
        };
        McEstimate {
            n,
            samples,
            seed,
            hits_ge1: t.hits,
            sum_p: t.sum,
            sum_p2: t.sum_sq,
            p_hat,
            p_ci_low,
            p_ci_high,
            mean_hat,
            stderr_mean: (var / count).sqrt(),
        }
    }

    /// Binomial standard error of `p_hat`.
    pub fn stderr_p(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.samples as f64).sqrt()
    }
}

fn tally_range(pat: &RootedPattern, n: usize, seed: u64, range: std::ops::Range<u64>) -> Tally {
    range.fold(Tally::default(), |acc, k| {
        let tree = sample_tree(n, &mut SplitMix64::for_sample(seed, k));
        let c = count_patterns(&tree, pat) as u64;
        acc.add(Tally {
            hits: u64::from(c >= 1),
            sum: c,
            sum_sq: u128::from(c) * u128::from(c),
        })
    })
}

/// Estimates `P(P_n >= 1)` and `E(P_n)` from `samples` independent trees.
pub fn estimate_pattern_stats(
    pat: &RootedPattern,
    n: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<McEstimate, McError> {
    if samples == 0 {
        return Err(McError::NoSamples);
    }
    if n < pat.p() + 1 {
        return Err(McError::HostTooSmall { n, min: pat.p() + 1 });
    }
    let tally = if workers <= 1 {
        tally_range(pat, n, seed, 0..samples)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..samples.div_ceil(BLOCK))
                .into_par_iter()
                .map(|b| tally_range(pat, n, seed, b * BLOCK..((b + 1) * BLOCK).min(samples)))
                .reduce(Tally::default, Tally::add)
        })
    };
    Ok(McEstimate::from_tally(n, samples, seed, tally))
}

/// One size of a convergence run, with the exact values where defined.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub estimate: McEstimate,
    /// `E_n(P_n)`, defined for `n >= p + 2`.
    pub exact_mean: Option<Rational>,
    /// Chebyshev bound on `P_n(P_n = 0)`, defined for `n >= 2p + 2`.
    pub cheb_bound: Option<Rational>,
}

impl ConvergenceRow {
    pub fn csv_record(&self) -> CsvRow {
        let e = &self.estimate;
        CsvRow {
            n: e.n,
            samples: e.samples,
            hits_ge1: e.hits_ge1,
            p_hat: e.p_hat,
            ci_low: e.p_ci_low,
            ci_high: e.p_ci_high,
            mean_hat: e.mean_hat,
            stderr_mean: e.stderr_mean,
            exact_mean: self.exact_mean.as_ref().map(ToString::to_string).unwrap_or_default(),
            cheb_bound: self.cheb_bound.as_ref().map(ToString::to_string).unwrap_or_default(),
        }
    }
}

/// CSV layout: `n,samples,hits_ge1,p_hat,ci_low,ci_high,mean_hat,stderr_mean,exact_mean,cheb_bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub n: usize,
    pub samples: u64,
    pub hits_ge1: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_hat: f64,
    pub stderr_mean: f64,
    pub exact_mean: String,
    pub cheb_bound: String,
}

/// Runs [`estimate_pattern_stats`] at every size in `n_list` with the same seed.
pub fn convergence_experiment(
    pat: &RootedPattern,
    n_list: &[usize],
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<ConvergenceRow>, McError> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(McError::UnsortedSizes);
    }
    n_list
        .iter()
        .map(|&n| {
            Ok(ConvergenceRow {
                estimate: estimate_pattern_stats(pat, n, samples, seed, workers)?,
                exact_mean: moments::mean_pattern_count(pat, n).ok(),
                cheb_bound: moments::chebyshev_zero_bound(pat, n).ok(),
            })
        })
        .collect()
}
