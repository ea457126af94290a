//! Exact laws at small sizes, in rational arithmetic: closed forms,
//! distributional recursions, and exhaustive enumeration over trees and
//! removal orders. Used as ground truth for every sampler.

mod exhaustive;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

pub use exhaustive::{
    exact_conditional_split_check, exhaustive_destruction, exhaustive_percolation_law, exhaustive_subtree_law,
    Outcome, SplitCheck, Statistic, EXHAUSTIVE_CAP, SPLIT_CHECK_CAP,
};

/// Largest `n` accepted by [`exact_isolation_law`].
pub const RECURSION_CAP: usize = 200;

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A finitely supported law with exact rational weights summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution<K: Ord = usize> {
    atoms: BTreeMap<K, BigRational>,
}

impl<K: Ord + Clone> ExactDistribution<K> {
    /// Normalizes nonnegative integer counts.
    pub fn from_counts(counts: BTreeMap<K, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(invalid("no mass to normalize"));
        }
        let atoms = counts
            .into_iter()
            .filter(|(_, c)| *c > 0)
            .map(|(k, c)| (k, ratio(c, total)))
            .collect();
        Ok(Self { atoms })
    }

    /// Accepts weights that are nonnegative and sum to exactly one; zero
    /// weights are dropped.
    pub fn from_probs(probs: BTreeMap<K, BigRational>) -> Result<Self> {
        if probs.values().any(|p| p.is_negative()) {
            return Err(invalid("negative probability"));
        }
        let total: BigRational = probs.values().sum();
        if !total.is_one() {
            return Err(invalid(format!("probabilities sum to {total}")));
        }
        Ok(Self {
            atoms: probs.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        })
    }

    pub fn prob(&self, k: &K) -> BigRational {
        self.atoms.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<K> {
        self.atoms.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigRational)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total(&self) -> BigRational {
        self.atoms.values().sum()
    }

    /// `max_k |P(k) - Q(k)|` over the union of supports.
    pub fn max_deviation(&self, other: &Self) -> BigRational {
        self.atoms
            .keys()
            .chain(other.atoms.keys())
            .map(|k| (self.prob(k) - other.prob(k)).abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn to_f64(&self) -> Vec<(K, f64)> {
        self.atoms
            .iter()
            .map(|(k, p)| (k.clone(), p.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }

    /// Image law under `f`.
    pub fn map<J: Ord + Clone>(&self, f: impl Fn(&K) -> J) -> ExactDistribution<J> {
        let mut atoms: BTreeMap<J, BigRational> = BTreeMap::new();
        for (k, p) in &self.atoms {
            *atoms.entry(f(k)).or_insert_with(BigRational::zero) += p;
        }
        ExactDistribution { atoms }
    }
}

impl ExactDistribution<usize> {
    pub fn mean(&self) -> BigRational {
        self.atoms
            .iter()
            .map(|(&k, p)| p * BigRational::from_integer(k.into()))
            .sum()
    }

    /// Atom-wise check of empirical counts against the law: every sampled
    /// value must lie in the support, and every atom frequency must be within
    /// `z` standard errors. Returns the largest standardized deviation.
    pub fn check_counts(&self, counts: &BTreeMap<usize, u64>, z: f64) -> Result<f64> {
        check_counts_generic(self, counts, z)
    }
}

/// See [`ExactDistribution::check_counts`].
pub fn check_counts_generic<K: Ord + Clone + fmt::Debug>(
    law: &ExactDistribution<K>,
    counts: &BTreeMap<K, u64>,
    z: f64,
) -> Result<f64> {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(invalid("no samples"));
    }
    if let Some(k) = counts.keys().find(|k| law.prob(k).is_zero()) {
        return Err(invalid(format!("sampled value {k:?} outside the exact support")));
    }
    let m = total as f64;
    let mut worst: f64 = 0.0;
    for (k, p) in law.to_f64() {
        let freq = counts.get(&k).copied().unwrap_or(0) as f64 / m;
        let se = (p * (1.0 - p) / m).sqrt();
        let dev = if se > 0.0 { (freq - p).abs() / se } else { 0.0 };
        worst = worst.max(dev);
    }
    if worst > z {
        return Err(invalid(format!("frequency off by {worst:.2} standard errors")));
    }
    Ok(worst)
}

impl<K: Ord + fmt::Display> fmt::Display for ExactDistribution<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in &self.atoms {
            writeln!(f, "{k}\t{p}\t{:.12}", p.to_f64().unwrap_or(f64::NAN))?;
        }
        Ok(())
    }
}

/// Law of the size of the subtree cut by a uniform first removal in a
/// recursive tree with `n` edges: `P(j) = (n + 1) / (n j (j + 1))`.
pub fn exact_split_law(n: usize) -> Result<ExactDistribution> {
    if n == 0 {
        return Err(invalid("split law needs n >= 1"));
    }
    let n64 = n as u64;
    let probs = (1..=n64)
        .map(|j| (j as usize, ratio(n64 + 1, n64 * j * (j + 1))))
        .collect();
    ExactDistribution::from_probs(probs)
}

/// Law of the number of cuts isolating the root, by `X_0 = 0` and
/// `X_m = 1 + X_{m - D_m}` with `D_m` drawn from [`exact_split_law`].
///
/// Each law is held as integer numerators over one common denominator and
/// reduced once per level, which keeps the cost at one big-integer product
/// per term instead of a gcd per addition.
pub fn exact_isolation_law(n: usize) -> Result<ExactDistribution> {
    if n > RECURSION_CAP {
        return Err(Error::SizeCap {
            what: "exact isolation law",
            requested: n,
            cap: RECURSION_CAP,
        });
    }
    // laws[m] = (numerators indexed by x, denominator).
    let mut laws: Vec<(Vec<BigInt>, BigInt)> = vec![(vec![BigInt::one()], BigInt::one())];
    for m in 1..=n {
        let weight = |j: usize| BigInt::from(j) * BigInt::from(j + 1);
        let common = (1..=m).fold(BigInt::one(), |acc, j| acc.lcm(&(&laws[m - j].1 * weight(j))));
        let mut num = vec![BigInt::zero(); m + 1];
        for j in 1..=m {
            let (prev, den) = &laws[m - j];
            let scale = &common / (den * weight(j));
            for (x, c) in prev.iter().enumerate() {
                if !c.is_zero() {
                    num[x + 1] += c * &scale;
                }
            }
        }
        let m_big = BigInt::from(m);
        for c in num.iter_mut() {
            *c *= m + 1;
        }
        let mut den = common * m_big;
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        laws.push((num, den));
    }
    let (num, den) = laws.swap_remove(n);
    let probs = num
        .into_iter()
        .enumerate()
        .map(|(x, c)| (x, BigRational::new(c, den.clone())))
        .collect();
    ExactDistribution::from_probs(probs)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Beta function at positive integers.
fn beta_int(a: usize, b: usize) -> BigRational {
    BigRational::new(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))
}

/// Beta-binomial law on `0..=trials` with integer shape parameters.
pub fn beta_binomial_law(trials: usize, a: usize, b: usize) -> Result<ExactDistribution> {
    if a == 0 || b == 0 {
        return Err(invalid("beta-binomial shapes must be positive"));
    }
    let norm = beta_int(a, b);
    let probs = (0..=trials)
        .map(|x| {
            let binom = BigRational::new(factorial(trials), factorial(x) * factorial(trials - x));
            (x, binom * beta_int(x + a, trials - x + b) / &norm)
        })
        .collect();
    ExactDistribution::from_probs(probs)
}

/// Law of `|T_n^k|`, the subtree rooted at `k`: one plus a
/// beta-binomial`(n - k, 1, k)` variable.
pub fn subtree_size_law(n: usize, k: usize) -> Result<ExactDistribution> {
    if k == 0 || k > n {
        return Err(invalid(format!("subtree root {k} outside 1..={n}")));
    }
    Ok(beta_binomial_law(n - k, 1, k)?.map(|x| x + 1))
}

/// Shape law of a binary tree grown from one leaf by splitting a uniform leaf
/// `n` times (the random binary search tree). Shapes are written as in
/// [`crate::cut_tree::CutTree::shape`].
pub fn bst_shape_law(n: usize) -> Result<ExactDistribution<String>> {
    if n > RECURSION_CAP {
        return Err(Error::SizeCap {
            what: "binary search tree shape law",
            requested: n,
            cap: RECURSION_CAP,
        });
    }
    let mut law: BTreeMap<String, BigRational> = BTreeMap::from([(".".to_string(), BigRational::one())]);
    for leaves in 1..=n {
        let w = ratio(1, leaves as u64);
        let mut next = BTreeMap::new();
        for (shape, p) in &law {
            for (pos, _) in shape.match_indices('.') {
                let grown = format!("{}(..){}", &shape[..pos], &shape[pos + 1..]);
                *next.entry(grown).or_insert_with(BigRational::zero) += p * &w;
            }
        }
        law = next;
    }
    ExactDistribution::from_probs(law)
}

/// Law of the root percolation cluster with retention probability `p`, by
/// the urn recursion: vertex `i` joins a root cluster of size `r` with
/// probability `p r / i`.
pub fn root_cluster_law(n: usize, p: &BigRational) -> Result<ExactDistribution> {
    if p.is_negative() || p > &BigRational::one() {
        return Err(invalid(format!("retention probability {p} outside [0, 1]")));
    }
    if n > RECURSION_CAP {
        return Err(Error::SizeCap {
            what: "root cluster law",
            requested: n,
            cap: RECURSION_CAP,
        });
    }
    let mut law = vec![BigRational::zero(); n + 2];
    law[1] = BigRational::one();
    for i in 1..=n {
        let mut next = vec![BigRational::zero(); n + 2];
        for r in 1..=i {
            if law[r].is_zero() {
                continue;
            }
            let join = p * ratio(r as u64, i as u64);
            next[r + 1] += &law[r] * &join;
            next[r] += &law[r] * (BigRational::one() - join);
        }
        law = next;
    }
    ExactDistribution::from_probs(law.into_iter().enumerate().collect())
}

/// Law of the root degree: a sum of independent Bernoulli`(1/i)`,
/// `i = 1..=n`.
pub fn root_degree_law(n: usize) -> Result<ExactDistribution> {
    if n > RECURSION_CAP {
        return Err(Error::SizeCap {
            what: "root degree law",
            requested: n,
            cap: RECURSION_CAP,
        });
    }
    let mut law = vec![BigRational::one()];
    for i in 1..=n {
        let q = ratio(1, i as u64);
        let mut next = vec![BigRational::zero(); law.len() + 1];
        for (d, p) in law.iter().enumerate() {
            next[d + 1] += p * &q;
            next[d] += p * (BigRational::one() - &q);
        }
        law = next;
    }
    ExactDistribution::from_probs(law.into_iter().enumerate().collect())
}
