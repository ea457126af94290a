//! Bernoulli bond percolation on recursive trees, the supercritical regime
//! `p = 1 - t / ln n`, and the urn and Yule descriptions of the root cluster.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::rng::{run_trials, tags};
use crate::stats::{ks_statistic, EmpiricalDistribution, Reference};
use crate::tree::IncreasingTree;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("retention probability {p} outside [0, 1]")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PercolationOutcome {
    pub p: f64,
    /// `kept[i]` says whether the edge `{parent(i), i}` survived; `kept[0]`
    /// is unused and `false`.
    pub kept: Vec<bool>,
    pub root_cluster_size: usize,
    /// Sizes of the other clusters, largest first.
    pub ranked_nonroot_sizes: Vec<usize>,
}

impl PercolationOutcome {
    pub fn n_vertices(&self) -> usize {
        self.kept.len()
    }
}

/// Cluster sizes indexed by the smallest vertex of each cluster (zero for
/// vertices that are not the smallest of their cluster).
///
/// Parents precede children, so one forward pass labels every vertex with
/// the smallest vertex of its cluster.
fn cluster_sizes(parent: &[usize], kept: &[bool]) -> Vec<usize> {
    let mut label: Vec<u32> = Vec::with_capacity(parent.len());
    let mut size = vec![0usize; parent.len()];
    for i in 0..parent.len() {
        let l = if i > 0 && kept[i] { label[parent[i]] } else { i as u32 };
        label.push(l);
        size[l as usize] += 1;
    }
    size
}

fn ranked(mut sizes: Vec<usize>) -> Vec<usize> {
    sizes.retain(|&s| s > 0);
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Keeps every edge of `tree` independently with probability `p`.
pub fn percolate<R: Rng + ?Sized>(tree: &IncreasingTree, p: f64, rng: &mut R) -> Result<PercolationOutcome> {
    check_p(p)?;
    let parent = tree.parents();
    let mut kept = vec![false; parent.len()];
    for k in kept.iter_mut().skip(1) {
        *k = rng.random_bool(p);
    }
    let mut sizes = cluster_sizes(parent, &kept);
    let root_cluster_size = sizes[0];
    sizes[0] = 0;
    Ok(PercolationOutcome {
        p,
        kept,
        root_cluster_size,
        ranked_nonroot_sizes: ranked(sizes),
    })
}

/// Root cluster and non-root cluster sizes of a percolated uniform recursive
/// tree on `{0, ..., n}`, growing the tree and the clusters together without
/// storing the tree. Same law as [`percolate`] on [`crate::tree::sample_rrt`].
pub fn sample_cluster_sizes<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<(usize, Vec<usize>)> {
    check_p(p)?;
    let mut label: Vec<u32> = Vec::with_capacity(n + 1);
    let mut size = vec![0usize; n + 1];
    label.push(0);
    size[0] = 1;
    for i in 1..=n {
        let l = if rng.random_bool(p) {
            label[rng.random_range(0..i)]
        } else {
            i as u32
        };
        label.push(l);
        size[l as usize] += 1;
    }
    let root = size[0];
    size[0] = 0;
    Ok((root, ranked(size)))
}

/// Root cluster size alone: vertex `i` joins it with probability `p r / i`
/// where `r` is the current root cluster size.
pub fn sample_root_cluster<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<usize> {
    check_p(p)?;
    let mut r = 1usize;
    for i in 1..=n {
        if rng.random_bool(p) && rng.random_range(0..i) < r {
            r += 1;
        }
    }
    Ok(r)
}

/// `p(n) = 1 - t / ln n`.
pub fn supercritical_p(n: usize, t: f64) -> Result<f64> {
    if n < 3 || t.is_nan() || t <= 0.0 {
        return Err(invalid(format!("supercritical regime needs n >= 3 and t > 0 (n = {n}, t = {t})")));
    }
    let p = 1.0 - t / (n as f64).ln();
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("p = 1 - t/ln n = {p} outside (0, 1) for n = {n}, t = {t}")));
    }
    Ok(p)
}

/// `(C0/n - e^{-t}) ln n - t e^{-t} ln ln n`.
pub fn root_fluctuation_statistic(root_cluster_size: usize, n: usize, t: f64) -> f64 {
    let ln_n = (n as f64).ln();
    let e = (-t).exp();
    (root_cluster_size as f64 / n as f64 - e) * ln_n - t * e * ln_n.ln()
}

/// Number of largest non-root clusters retained per trial.
pub const RANKED_KEPT: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct SupercriticalTrial {
    /// `C_{0,n} / n`.
    pub root_fraction: f64,
    /// `(ln n / n) C_{j,n}` for the [`RANKED_KEPT`] largest non-root clusters.
    pub ranked_normalized: Vec<f64>,
    pub root_fluctuation: f64,
}

impl SupercriticalTrial {
    /// Number of normalized non-root clusters at least `x`. Exact as long as
    /// fewer than [`RANKED_KEPT`] clusters reach `x`.
    pub fn clusters_at_least(&self, x: f64) -> usize {
        self.ranked_normalized.iter().take_while(|&&v| v >= x).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupercriticalSummary {
    pub n: usize,
    pub t: f64,
    pub p: f64,
    pub trials: Vec<SupercriticalTrial>,
}

impl SupercriticalSummary {
    pub fn root_fractions(&self) -> Vec<f64> {
        self.trials.iter().map(|s| s.root_fraction).collect()
    }

    /// `j`-th largest normalized non-root cluster (`j >= 1`), 0 if absent.
    pub fn normalized_rank(&self, j: usize) -> Vec<f64> {
        self.trials
            .iter()
            .map(|s| s.ranked_normalized.get(j - 1).copied().unwrap_or(0.0))
            .collect()
    }

    pub fn root_fluctuation(&self) -> Vec<f64> {
        self.trials.iter().map(|s| s.root_fluctuation).collect()
    }

    /// Limit CDF of the largest normalized non-root cluster,
    /// `exp(-t e^{-t} / x)`.
    pub fn largest_cluster_reference(&self) -> Reference {
        Reference::Frechet { c: self.t * (-self.t).exp() }
    }

    pub fn root_fluctuation_reference(&self) -> Reference {
        Reference::root_cluster_fluctuation(self.t)
    }
}

/// `trials` independent percolations of uniform recursive trees of size `n`
/// at `p = 1 - t / ln n`.
pub fn supercritical_run(n: usize, t: f64, trials: usize, seed: u64) -> Result<SupercriticalSummary> {
    let p = supercritical_p(n, t)?;
    let scale = (n as f64).ln() / n as f64;
    let trials = run_trials(seed, tags::PERCOLATION, trials, |_, rng| {
        let (root, rest) = sample_cluster_sizes(n, p, rng).expect("p checked");
        SupercriticalTrial {
            root_fraction: root as f64 / n as f64,
            ranked_normalized: rest.iter().take(RANKED_KEPT).map(|&c| c as f64 * scale).collect(),
            root_fluctuation: root_fluctuation_statistic(root, n, t),
        }
    });
    Ok(SupercriticalSummary { n, t, p, trials })
}

/// A Yule process started from one root-type individual, where each newborn
/// is a clone of its parent with probability `p` and a mutant otherwise;
/// children of mutants are mutants. Stopped at population `n + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct YuleTrace {
    /// `times[k]` is the time the population reached `k + 1`.
    pub times: Vec<f64>,
    /// Root-type population after each event, aligned with `times`.
    pub root_type: Vec<usize>,
}

impl YuleTrace {
    /// Index of the event that reaches population `n + 1`.
    pub fn rho(&self) -> usize {
        self.times.len() - 1
    }

    pub fn population(&self, k: usize) -> usize {
        k + 1
    }

    pub fn final_root_type(&self) -> usize {
        *self.root_type.last().expect("trace is nonempty")
    }

    /// Population at time `s`, or `None` past the stopping time.
    pub fn population_at(&self, s: f64) -> Option<usize> {
        let k = self.times.partition_point(|&x| x <= s);
        (k < self.times.len()).then_some(k)
    }
}

pub fn yule_with_mutations<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<YuleTrace> {
    check_p(p)?;
    let mut times = Vec::with_capacity(n + 1);
    let mut root_type = Vec::with_capacity(n + 1);
    let (mut now, mut r) = (0.0, 1usize);
    times.push(now);
    root_type.push(r);
    for k in 1..=n {
        // k individuals each split at rate 1.
        now += -(1.0 - rng.random::<f64>()).ln() / k as f64;
        if rng.random_range(0..k) < r && rng.random_bool(p) {
            r += 1;
        }
        times.push(now);
        root_type.push(r);
    }
    Ok(YuleTrace { times, root_type })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UrnState {
    pub red: usize,
    pub black: usize,
}

impl UrnState {
    pub fn total(&self) -> usize {
        self.red + self.black
    }
}

/// Starts from one red ball. Each draw picks a ball uniformly; a red pick adds
/// a red ball with probability `p` and a black one otherwise, a black pick
/// adds a black ball.
pub fn polya_hoppe_urn<R: Rng + ?Sized>(n_draws: usize, p: f64, rng: &mut R) -> Result<UrnState> {
    check_p(p)?;
    let mut state = UrnState { red: 1, black: 0 };
    for _ in 0..n_draws {
        if rng.random_range(0..state.total()) < state.red && rng.random_bool(p) {
            state.red += 1;
        } else {
            state.black += 1;
        }
    }
    Ok(state)
}

/// Size of the subtree rooted at `k` in a uniform recursive tree on
/// `{0, ..., n}`: a Pólya urn started at time `k` with one red and `k` black
/// balls, run for `n - k` draws.
pub fn sample_subtree_size<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<usize> {
    if k == 0 || k > n {
        return Err(invalid(format!("subtree root {k} outside 1..={n}")));
    }
    let mut red = 1usize;
    for total in k + 1..=n {
        if rng.random_range(0..total) < red {
            red += 1;
        }
    }
    Ok(red)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubtreeLimitSummary {
    pub n: usize,
    pub k: usize,
    /// `|T_n^k| / n` per trial.
    pub fractions: EmpiricalDistribution,
    /// KS distance to Beta(1, k).
    pub ks: f64,
}

pub fn polya_subtree_limit(n: usize, k: usize, trials: usize, seed: u64) -> Result<SubtreeLimitSummary> {
    if k == 0 || k > n || trials == 0 {
        return Err(invalid(format!("need 1 <= k <= n and trials > 0 (n = {n}, k = {k})")));
    }
    let values = run_trials(seed, tags::URN, trials, |_, rng| {
        sample_subtree_size(n, k, rng).expect("k checked") as f64 / n as f64
    });
    let fractions = EmpiricalDistribution::new(values)?;
    let ks = ks_statistic(&fractions, &Reference::Beta { a: 1.0, b: k as f64 })?;
    Ok(SubtreeLimitSummary { n, k, fractions, ks })
}
