use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{exact_split_law, ratio, ExactDistribution};
use crate::component_tree::{build_component_tree, ComponentSizeTree};
use crate::cut_tree::{build_cut_tree, build_ordered_cut_tree};
use crate::destruction::{
    coalescent_from_trace, disconnect_targets, isolate_root, isolate_targets, replay_targets, DestructionTrace,
};
use crate::error::{invalid, Error, Result};
use crate::tree::{enumerate_increasing_trees, VertexSet};

/// Largest `n` for enumeration over trees and removal orders (`n!^2` traces).
pub const EXHAUSTIVE_CAP: usize = 6;
/// Largest `n` for [`exact_conditional_split_check`].
pub const SPLIT_CHECK_CAP: usize = 5;

/// A statistic of a destruction trace on `{0, ..., n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statistic {
    /// `X`: cuts isolating the root.
    RootIsolation,
    /// `X:<l>`: cuts isolating `0, ..., l-1`.
    FirstTargets { ell: usize },
    /// `Y:<l>`: cuts isolating `l` i.i.d. uniform vertices.
    RandomTargets { ell: usize },
    /// `Yset:<v>,<v>,...`: cuts isolating a fixed vertex set.
    FixedTargets(VertexSet),
    /// `Z:<l>`: cuts isolating the last `l` vertices `n-l+1, ..., n`.
    LastTargets { ell: usize },
    /// `A:<k>:<l>`: counted steps until `l` distinct uniform vertices occupy
    /// `k` components.
    Disconnect { k: usize, ell: usize },
    /// `B:<k>:<l>`: as `A` for the targets `0, ..., l-1`.
    FirstDisconnect { k: usize, ell: usize },
    /// `first-cut`: size of the subtree severed by the first removal.
    FirstCut,
    /// `leaf-depth:<v>`: depth of leaf `v` in the cut-tree.
    LeafDepth(usize),
    /// `component-shape`: unordered shape of the component-size tree with
    /// sizes.
    ComponentShape,
    /// `ordered-shape`: shape of the cut-tree of the ordered destruction.
    OrderedShape,
    /// `collisions`: collision events of the coalescent on the `n + 1`
    /// vertices.
    Collisions,
}

impl Statistic {
    /// Syntax accepted by [`FromStr`].
    pub const SYNTAX: &'static [&'static str] = &[
        "X",
        "X:<l>",
        "Y:<l>",
        "Yset:<v>,<v>,...",
        "Z:<l>",
        "A:<k>:<l>",
        "B:<k>:<l>",
        "first-cut",
        "leaf-depth:<v>",
        "component-shape",
        "ordered-shape",
        "collisions",
    ];

    fn validate(&self, n: usize) -> Result<()> {
        let ell_ok = |ell: usize| (1..=n + 1).contains(&ell);
        let ok = match self {
            Statistic::FirstTargets { ell } | Statistic::RandomTargets { ell } | Statistic::LastTargets { ell } => {
                ell_ok(*ell)
            }
            Statistic::Disconnect { k, ell } | Statistic::FirstDisconnect { k, ell } => {
                ell_ok(*ell) && *k >= 2 && k <= ell
            }
            Statistic::FixedTargets(t) => t.max() <= n,
            Statistic::LeafDepth(v) => *v <= n,
            Statistic::FirstCut | Statistic::Collisions => n >= 1,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("statistic {self} is not defined for n = {n}")))
        }
    }

    /// Target sets the statistic averages over, with integer weights.
    fn target_sets(&self, n: usize) -> Result<Vec<(VertexSet, u64)>> {
        Ok(match self {
            Statistic::FirstTargets { ell } | Statistic::FirstDisconnect { ell, .. } => {
                vec![(VertexSet::range(0, ell - 1)?, 1)]
            }
            Statistic::LastTargets { ell } => vec![(VertexSet::range(n + 1 - ell, n)?, 1)],
            Statistic::FixedTargets(t) => vec![(t.clone(), 1)],
            Statistic::RandomTargets { ell } => {
                let mut sets: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
                let mut tuple = vec![0usize; *ell];
                loop {
                    let mut s = tuple.clone();
                    s.sort_unstable();
                    s.dedup();
                    *sets.entry(s).or_default() += 1;
                    let Some(i) = (0..*ell).rev().find(|&i| tuple[i] < n) else {
                        break;
                    };
                    tuple[i] += 1;
                    tuple[i + 1..].iter_mut().for_each(|x| *x = 0);
                }
                sets.into_iter()
                    .map(|(s, w)| Ok((VertexSet::new(s)?, w)))
                    .collect::<Result<_>>()?
            }
            Statistic::Disconnect { ell, .. } => subsets(n + 1, *ell)
                .into_iter()
                .map(|s| Ok((VertexSet::new(s)?, 1)))
                .collect::<Result<_>>()?,
            _ => vec![(VertexSet::single(0), 1)],
        })
    }

    /// Whether the targets are drawn at random rather than fixed by the
    /// statistic.
    pub fn has_random_targets(&self) -> bool {
        matches!(self, Statistic::RandomTargets { .. } | Statistic::Disconnect { .. })
    }

    /// Value on one trace. `targets` is required exactly when the statistic
    /// has random targets.
    pub fn evaluate(&self, trace: &DestructionTrace, targets: Option<&VertexSet>) -> Result<Outcome> {
        let n = trace.n_edges();
        self.validate(n)?;
        match (targets, self.has_random_targets()) {
            (Some(t), true) => {
                let expected = match self {
                    Statistic::RandomTargets { ell } => t.len() <= *ell,
                    Statistic::Disconnect { ell, .. } => t.len() == *ell,
                    _ => unreachable!(),
                };
                if !expected || t.max() > n {
                    return Err(invalid(format!("targets do not fit statistic {self}")));
                }
                self.evaluate_with(trace, t)
            }
            (None, false) => self.evaluate_with(trace, &self.target_sets(n)?[0].0),
            (None, true) => Err(invalid(format!("statistic {self} needs explicit targets"))),
            (Some(_), false) => Err(invalid(format!("statistic {self} fixes its own targets"))),
        }
    }

    fn evaluate_with(&self, trace: &DestructionTrace, targets: &VertexSet) -> Result<Outcome> {
        Ok(match self {
            Statistic::RootIsolation => Outcome::Count(isolate_root(trace).cuts),
            Statistic::FirstTargets { .. }
            | Statistic::RandomTargets { .. }
            | Statistic::FixedTargets(_)
            | Statistic::LastTargets { .. } => Outcome::Count(isolate_targets(trace, targets)?),
            Statistic::Disconnect { k, .. } | Statistic::FirstDisconnect { k, .. } => {
                Outcome::Count(disconnect_targets(trace, targets)?.a(*k).expect("k <= number of targets"))
            }
            Statistic::FirstCut => Outcome::Count(replay_targets(trace, targets)?[0].detached_size),
            Statistic::LeafDepth(v) => {
                let ct = build_cut_tree(trace);
                Outcome::Count(ct.depth(ct.leaf(*v)))
            }
            Statistic::ComponentShape => Outcome::Shape(component_shape(&build_component_tree(trace), 0)),
            Statistic::OrderedShape => Outcome::Shape(build_ordered_cut_tree(trace.tree()).shape()),
            Statistic::Collisions => Outcome::Count(coalescent_from_trace(trace).collisions()),
        })
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::RootIsolation => write!(f, "X"),
            Statistic::FirstTargets { ell } => write!(f, "X:{ell}"),
            Statistic::RandomTargets { ell } => write!(f, "Y:{ell}"),
            Statistic::FixedTargets(t) => {
                let list: Vec<String> = t.members().iter().map(|v| v.to_string()).collect();
                write!(f, "Yset:{}", list.join(","))
            }
            Statistic::LastTargets { ell } => write!(f, "Z:{ell}"),
            Statistic::Disconnect { k, ell } => write!(f, "A:{k}:{ell}"),
            Statistic::FirstDisconnect { k, ell } => write!(f, "B:{k}:{ell}"),
            Statistic::FirstCut => write!(f, "first-cut"),
            Statistic::LeafDepth(v) => write!(f, "leaf-depth:{v}"),
            Statistic::ComponentShape => write!(f, "component-shape"),
            Statistic::OrderedShape => write!(f, "ordered-shape"),
            Statistic::Collisions => write!(f, "collisions"),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownStatistic(s.to_string());
        let num = |x: &str| x.trim().parse::<usize>().map_err(|_| unknown());
        let parts: Vec<&str> = s.trim().split(':').collect();
        Ok(match parts.as_slice() {
            ["X"] => Statistic::RootIsolation,
            ["X", l] => Statistic::FirstTargets { ell: num(l)? },
            ["Y", l] => Statistic::RandomTargets { ell: num(l)? },
            ["Yset", list] => {
                let v = list.split(',').map(num).collect::<Result<Vec<_>>>()?;
                Statistic::FixedTargets(VertexSet::new(v)?)
            }
            ["Z", l] => Statistic::LastTargets { ell: num(l)? },
            ["A", k, l] => Statistic::Disconnect { k: num(k)?, ell: num(l)? },
            ["B", k, l] => Statistic::FirstDisconnect { k: num(k)?, ell: num(l)? },
            ["first-cut"] => Statistic::FirstCut,
            ["leaf-depth", v] => Statistic::LeafDepth(num(v)?),
            ["component-shape"] => Statistic::ComponentShape,
            ["ordered-shape"] => Statistic::OrderedShape,
            ["collisions"] => Statistic::Collisions,
            _ => return Err(unknown()),
        })
    }
}

/// Value of a statistic: a count, or a rendered tree shape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Count(usize),
    Shape(String),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Count(c) => write!(f, "{c}"),
            Outcome::Shape(s) => f.write_str(s),
        }
    }
}

impl ExactDistribution<Outcome> {
    /// The law of a count-valued statistic.
    pub fn into_counts(self) -> Result<ExactDistribution> {
        if self.atoms.keys().any(|k| matches!(k, Outcome::Shape(_))) {
            return Err(invalid("statistic is not count valued"));
        }
        Ok(self.map(|k| match k {
            Outcome::Count(c) => *c,
            Outcome::Shape(_) => unreachable!(),
        }))
    }

    pub fn into_shapes(self) -> Result<ExactDistribution<String>> {
        if self.atoms.keys().any(|k| matches!(k, Outcome::Count(_))) {
            return Err(invalid("statistic is not shape valued"));
        }
        Ok(self.map(|k| k.to_string()))
    }
}

/// Sizes with the children's renderings sorted, e.g. `4(1 2(1))`.
fn component_shape(tree: &ComponentSizeTree, v: usize) -> String {
    let mut kids: Vec<String> = tree.children(v).iter().map(|&c| component_shape(tree, c)).collect();
    if kids.is_empty() {
        return tree.size(v).to_string();
    }
    kids.sort();
    format!("{}({})", tree.size(v), kids.join(" "))
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..m {
            cur.push(v);
            go(v + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// All permutations of `1..=n` in lexicographic order.
fn removal_orders(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (1..=n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::SizeCap {
            what,
            requested: n,
            cap,
        });
    }
    Ok(())
}

/// Exact law of `statistic` under a uniform increasing tree on `{0, ..., n}`
/// and a uniform removal order, by enumerating all `n!` trees and all `n!`
/// orders (and, for random targets, all target choices).
pub fn exhaustive_destruction(n: usize, statistic: &Statistic) -> Result<ExactDistribution<Outcome>> {
    check_cap("exhaustive destruction", n, EXHAUSTIVE_CAP)?;
    statistic.validate(n)?;
    let sets = statistic.target_sets(n)?;
    let orders = removal_orders(n);
    let trees = enumerate_increasing_trees(n)?;
    let per_tree = trees
        .into_par_iter()
        .map(|tree| -> Result<BTreeMap<Outcome, u64>> {
            let mut counts = BTreeMap::new();
            for order in &orders {
                let trace = DestructionTrace::from_order(tree.clone(), order.clone())?;
                for (targets, w) in &sets {
                    *counts.entry(statistic.evaluate_with(&trace, targets)?).or_default() += w;
                }
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = BTreeMap::new();
    for m in per_tree {
        for (k, c) in m {
            *total.entry(k).or_default() += c;
        }
    }
    ExactDistribution::from_counts(total)
}

/// Exact law of the root cluster of Bernoulli(`p`) bond percolation on a
/// uniform increasing tree, by enumerating trees and retained edge sets.
pub fn exhaustive_percolation_law(n: usize, p: &BigRational) -> Result<ExactDistribution> {
    check_cap("exhaustive percolation", n, EXHAUSTIVE_CAP)?;
    if p.is_negative() || p > &BigRational::one() {
        return Err(invalid(format!("retention probability {p} outside [0, 1]")));
    }
    let q = BigRational::one() - p;
    let trees = enumerate_increasing_trees(n)?;
    let tree_weight = ratio(1, trees.len() as u64);
    let mut law: BTreeMap<usize, BigRational> = BTreeMap::new();
    for tree in &trees {
        let parent = tree.parents();
        for mask in 0u32..(1 << n) {
            let mut in_root = vec![false; n + 1];
            in_root[0] = true;
            let mut weight = tree_weight.clone();
            for i in 1..=n {
                let kept = mask >> (i - 1) & 1 == 1;
                weight *= if kept { p } else { &q };
                in_root[i] = kept && in_root[parent[i]];
            }
            let size = in_root.iter().filter(|&&b| b).count();
            *law.entry(size).or_insert_with(BigRational::zero) += weight;
        }
    }
    ExactDistribution::from_probs(law)
}

/// Exact law of `|T_n^k|` by enumerating increasing trees.
pub fn exhaustive_subtree_law(n: usize, k: usize) -> Result<ExactDistribution> {
    if k == 0 || k > n {
        return Err(invalid(format!("subtree root {k} outside 1..={n}")));
    }
    let mut counts = BTreeMap::new();
    for tree in enumerate_increasing_trees(n)? {
        *counts.entry(tree.subtree_size(k)?).or_default() += 1;
    }
    ExactDistribution::from_counts(counts)
}

/// Result of [`exact_conditional_split_check`] for one severed size `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBucket {
    pub j: usize,
    pub probability: BigRational,
    /// Largest deviation of the conditional joint law of the two relabeled
    /// pieces from the product of uniform laws.
    pub max_deviation: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCheck {
    pub n: usize,
    pub buckets: Vec<SplitBucket>,
    /// Deviation of the law of `j` from [`exact_split_law`].
    pub size_law_deviation: BigRational,
}

impl SplitCheck {
    pub fn passed(&self) -> bool {
        self.size_law_deviation.is_zero() && self.buckets.iter().all(|b| b.max_deviation.is_zero())
    }
}

/// Enumerates all (tree, first removal) pairs on `{0, ..., n}` and checks
/// that, given the severed subtree has `j` vertices, the relabeled root part
/// and severed part are independent uniform increasing trees.
pub fn exact_conditional_split_check(n: usize) -> Result<SplitCheck> {
    check_cap("conditional split check", n, SPLIT_CHECK_CAP)?;
    if n == 0 {
        return Err(invalid("split check needs n >= 1"));
    }
    type Pair = (Vec<usize>, Vec<usize>);
    let mut joint: BTreeMap<usize, BTreeMap<Pair, u64>> = BTreeMap::new();
    let trees = enumerate_increasing_trees(n)?;
    let configs = (trees.len() * n) as u64;
    for tree in &trees {
        let children = tree.children();
        for e in 1..=n {
            let mut below = vec![false; n + 1];
            let mut stack = vec![e];
            while let Some(v) = stack.pop() {
                below[v] = true;
                stack.extend_from_slice(children.of(v));
            }
            let (cut, rest): (Vec<usize>, Vec<usize>) = (0..=n).partition(|&v| below[v]);
            let j = cut.len();
            let root_part = tree.induced(&VertexSet::new(rest)?)?.into_parents();
            let cut_part = tree.induced(&VertexSet::new(cut)?)?.into_parents();
            *joint.entry(j).or_default().entry((root_part, cut_part)).or_default() += 1;
        }
    }
    let split = exact_split_law(n)?;
    let mut buckets = Vec::new();
    let mut sizes = BTreeMap::new();
    for j in 1..=n {
        let bucket = joint.remove(&j).unwrap_or_default();
        let mass: u64 = bucket.values().sum();
        sizes.insert(j, mass);
        let probability = ratio(mass, configs);
        let left = enumerate_increasing_trees(n - j)?;
        let right = enumerate_increasing_trees(j - 1)?;
        let uniform = ratio(1, (left.len() * right.len()) as u64);
        let mut max_deviation = BigRational::zero();
        let mut seen = 0u64;
        for a in &left {
            for b in &right {
                let key = (a.parents().to_vec(), b.parents().to_vec());
                let c = bucket.get(&key).copied().unwrap_or(0);
                seen += c;
                let observed = if mass == 0 { BigRational::zero() } else { ratio(c, mass) };
                max_deviation = max_deviation.max((observed - &uniform).abs());
            }
        }
        if seen != mass {
            // Some piece was not an increasing tree of the expected size.
            max_deviation = BigRational::one();
        }
        buckets.push(SplitBucket {
            j,
            probability,
            max_deviation,
        });
    }
    let observed_sizes = ExactDistribution::from_counts(sizes)?;
    Ok(SplitCheck {
        n,
        buckets,
        size_law_deviation: observed_sizes.max_deviation(&split),
    })
}
