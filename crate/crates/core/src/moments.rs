//! Exact first and second moments of the pattern count under the uniform
//! measure on labelled trees with `n` vertices.
//!
//! Everything is evaluated in big rationals; `to_f64` views are derived at the
//! end. Powers use the convention `0^0 = 1`, which is what the boundary
//! `n = 2(p + 1)` needs: there the two copies are glued root to root.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::MomentError;
use crate::iso::{labelled_rooted_count, RootedPattern};

pub type Rational = BigRational;

fn int(v: usize) -> BigInt {
    BigInt::from(v)
}

/// `base^exp` with `0^0 = 1`.
fn power(base: usize, exp: usize) -> BigInt {
    num_traits::pow(int(base), exp)
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(int).product()
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    // exact at every step: the running value is C(n - k + i, i)
    (1..=k).fold(BigInt::from(1), |acc, i| acc * int(n - k + i) / int(i))
}

/// Number of labelled trees on `n` vertices, `n^(n-2)`, for `n >= 2`.
pub fn cayley(n: usize) -> BigInt {
    power(n, n - 2)
}

fn ratio(num: BigInt, den: BigInt) -> Rational {
    BigRational::new(num, den)
}

fn require(n: usize, min: usize) -> Result<(), MomentError> {
    if n < min {
        Err(MomentError::DomainTooSmall { n, min })
    } else {
        Ok(())
    }
}

fn labelled_count(pat: &RootedPattern) -> BigInt {
    BigInt::from(labelled_rooted_count(pat))
}

fn aut(pat: &RootedPattern) -> BigInt {
    BigInt::from(pat.aut_root_order().clone())
}

/// Probability that a fixed index tuple `(j, i_1, ..., i_p)` is an occurrence.
pub fn gamma_expectation(
    pat: &RootedPattern,
    n: usize,
    has_duplicate_indices: bool,
) -> Result<Rational, MomentError> {
    if has_duplicate_indices {
        return Ok(Rational::zero());
    }
    let p = pat.p();
    require(n, p + 2)?;
    Ok(ratio(
        labelled_count(pat) * power(n - (p + 1), n - (p + 2)),
        cayley(n),
    ))
}

/// `E_n(P_n)`: `n * C(n-1, p)` index classes times the single-tuple probability.
pub fn mean_pattern_count(pat: &RootedPattern, n: usize) -> Result<Rational, MomentError> {
    let single = gamma_expectation(pat, n, false)?;
    Ok(single * Rational::from_integer(int(n) * binomial(n - 1, pat.p())))
}

/// How two index tuples `(j; I)` and `(j'; I')` relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairRelation {
    /// All `2(p + 1)` indices are distinct.
    AllDistinct,
    /// `j = j'` and `I = I'`.
    SameRootSameSet,
    /// Overlapping but not identical.
    Other,
}

/// Probability that two fixed index tuples are both occurrences.
///
/// `Other` is only zero once `n >= 2(p + 1)`: with `n = 2p + 1` a root can
/// carry one copy on each side, so smaller `n` is rejected for it.
pub fn pair_gamma_expectation(
    pat: &RootedPattern,
    n: usize,
    relation: PairRelation,
) -> Result<Rational, MomentError> {
    let p = pat.p();
    match relation {
        PairRelation::AllDistinct => {
            require(n, 2 * (p + 1))?;
            let rest = n - 2 * (p + 1);
            let shapes = labelled_count(pat);
            Ok(ratio(&shapes * &shapes * power(rest, rest), cayley(n)))
        }
        PairRelation::SameRootSameSet => gamma_expectation(pat, n, false),
        PairRelation::Other => {
            require(n, 2 * (p + 1))?;
            Ok(Rational::zero())
        }
    }
}

/// `E_n(P_n^2)` for `n >= 2p + 2`.
pub fn second_moment_pattern_count(pat: &RootedPattern, n: usize) -> Result<Rational, MomentError> {
    let p = pat.p();
    require(n, 2 * p + 2)?;
    let aut = aut(pat);
    let rest = n - 2 * (p + 1);
    let distinct = ratio(
        factorial(n) * power(rest, rest),
        &aut * &aut * factorial(rest),
    );
    let same = ratio(
        factorial(n) * power(n - (p + 1), n - (p + 2)),
        aut * factorial(n - (p + 1)),
    );
    Ok((distinct + same) / Rational::from_integer(cayley(n)))
}

/// Chebyshev bound `E(P^2) / E(P)^2 - 1` on `P_n(P_n = 0)`.
pub fn chebyshev_zero_bound(pat: &RootedPattern, n: usize) -> Result<Rational, MomentError> {
    let second = second_moment_pattern_count(pat, n)?;
    let mean = mean_pattern_count(pat, n)?;
    if mean.is_zero() {
        return Err(MomentError::ZeroMean);
    }
    Ok(second / (&mean * &mean) - Rational::from_integer(1.into()))
}

/// Limit of `E_n(P_n) / n`: `e^-(p+1) / #Aut(v, P)`. The finite-`n` ratio
/// differs from it by `O(1/n)`.
pub fn asymptotic_slope(pat: &RootedPattern) -> f64 {
    let aut = pat.aut_root_order().to_f64().unwrap_or(f64::INFINITY);
    (-((pat.p() + 1) as f64)).exp() / aut
}

/// Exact moments of the pattern count at one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub n: usize,
    pub p: usize,
    pub aut_root_order: BigUint,
    pub mean: Rational,
    /// `None` below `n = 2p + 2`.
    pub second_moment: Option<Rational>,
    pub variance: Option<Rational>,
    pub chebyshev_zero_bound: Option<Rational>,
    pub asymptotic_slope: f64,
}

impl MomentReport {
    /// Needs `n >= p + 2`; the second-moment fields are filled when `n >= 2p + 2`.
    pub fn compute(pat: &RootedPattern, n: usize) -> Result<Self, MomentError> {
        let mean = mean_pattern_count(pat, n)?;
        let second_moment = match second_moment_pattern_count(pat, n) {
            Ok(v) => Some(v),
            Err(MomentError::DomainTooSmall { .. }) => None,
            Err(e) => return Err(e),
        };
        let variance = second_moment.as_ref().map(|s| s - &mean * &mean);
        let chebyshev_zero_bound = match (&variance, mean.is_zero()) {
            (Some(var), false) => Some(var / (&mean * &mean)),
            _ => None,
        };
        Ok(MomentReport {
            n,
            p: pat.p(),
            aut_root_order: pat.aut_root_order().clone(),
            mean,
            second_moment,
            variance,
            chebyshev_zero_bound,
            asymptotic_slope: asymptotic_slope(pat),
        })
    }

    pub fn record(&self) -> MomentRecord {
        let exact = |r: &Rational| r.to_string();
        let float = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        MomentRecord {
            n: self.n,
            p: self.p,
            aut_root_order: self.aut_root_order.to_string(),
            mean: exact(&self.mean),
            mean_f64: float(&self.mean),
            second_moment: self.second_moment.as_ref().map(exact),
            second_moment_f64: self.second_moment.as_ref().map(float),
            variance: self.variance.as_ref().map(exact),
            variance_f64: self.variance.as_ref().map(float),
            cheb_bound: self.chebyshev_zero_bound.as_ref().map(exact),
            cheb_bound_f64: self.chebyshev_zero_bound.as_ref().map(float),
            asymptotic_slope: self.asymptotic_slope,
        }
    }
}

/// Flat serializable view of a [`MomentReport`]. Rationals are
/// `"num/den"` strings (plain integers when the denominator is 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRecord {
    pub n: usize,
    pub p: usize,
    pub aut_root_order: String,
    pub mean: String,
    pub mean_f64: f64,
    pub second_moment: Option<String>,
    pub second_moment_f64: Option<f64>,
    pub variance: Option<String>,
    pub variance_f64: Option<f64>,
    pub cheb_bound: Option<String>,
    pub cheb_bound_f64: Option<f64>,
    pub asymptotic_slope: f64,
}
