//! Literal implementations of the staged algorithms: at every step an edge is
//! drawn uniformly among the edges of the components currently retained.
//!
//! These are quadratic and only meant for small trees, as a second simulator
//! to check the filtered-order implementations against.

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::tree::{Children, IncreasingTree, VertexSet};

use super::{DisconnectionResult, MultiIsolationResult};

/// A tree with some edges cut, components identified by labels.
struct Forest {
    parent: Vec<usize>,
    children: Children,
    cut: Vec<bool>,
    comp: Vec<usize>,
    next_label: usize,
}

impl Forest {
    fn new(tree: &IncreasingTree) -> Self {
        let parent = tree.parents().to_vec();
        let n1 = parent.len();
        Self {
            children: Children::new(&parent),
            parent,
            cut: vec![false; n1],
            comp: vec![0; n1],
            next_label: 1,
        }
    }

    /// Uncut edges whose component satisfies `keep`.
    fn edges_where(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        (1..self.parent.len())
            .filter(|&e| !self.cut[e] && keep(self.comp[e]))
            .collect()
    }

    /// Cuts edge `e`, giving the detached side a fresh label.
    fn cut(&mut self, e: usize) {
        self.cut[e] = true;
        let old = self.comp[e];
        let fresh = self.next_label;
        self.next_label += 1;
        let mut stack = vec![e];
        self.comp[e] = fresh;
        while let Some(v) = stack.pop() {
            for &c in self.children.of(v) {
                if !self.cut[c] && self.comp[c] == old {
                    self.comp[c] = fresh;
                    stack.push(c);
                }
            }
        }
    }

    fn targets_in(&self, label: usize, targets: &VertexSet) -> usize {
        targets
            .members()
            .iter()
            .filter(|&&t| self.comp[t] == label)
            .count()
    }

    fn size_of(&self, label: usize) -> usize {
        self.comp.iter().filter(|&&c| c == label).count()
    }
}

fn check(tree: &IncreasingTree, targets: &VertexSet) -> Result<()> {
    if targets.max() > tree.n_edges() {
        return Err(Error::VertexOutOfRange {
            vertex: targets.max(),
            max: tree.n_edges(),
        });
    }
    Ok(())
}

/// Cuts drawn uniformly among the edges of components holding a target,
/// until every target is isolated.
pub fn isolate_targets<R: Rng + ?Sized>(
    tree: &IncreasingTree,
    targets: &VertexSet,
    rng: &mut R,
) -> Result<usize> {
    check(tree, targets)?;
    let mut forest = Forest::new(tree);
    let mut cuts = 0;
    loop {
        let eligible = forest.edges_where(|c| forest.targets_in(c, targets) >= 1);
        if eligible.is_empty() {
            return Ok(cuts);
        }
        forest.cut(eligible[rng.random_range(0..eligible.len())]);
        cuts += 1;
    }
}

/// Cuts drawn uniformly among the edges of components holding at least two
/// targets, recording when the targets first span `k` components.
pub fn disconnect_targets<R: Rng + ?Sized>(
    tree: &IncreasingTree,
    targets: &VertexSet,
    rng: &mut R,
) -> Result<DisconnectionResult> {
    check(tree, targets)?;
    if targets.len() < 2 {
        return Err(invalid("disconnection needs at least two targets"));
    }
    let mut forest = Forest::new(tree);
    let mut cuts = 0;
    let mut counts = Vec::new();
    let mut spanned = 1;
    while counts.len() < targets.len() - 1 {
        let eligible = forest.edges_where(|c| forest.targets_in(c, targets) >= 2);
        forest.cut(eligible[rng.random_range(0..eligible.len())]);
        cuts += 1;
        let mut labels: Vec<usize> = targets.members().iter().map(|&t| forest.comp[t]).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() > spanned {
            spanned = labels.len();
            counts.push(cuts);
        }
    }
    Ok(DisconnectionResult { counts })
}

/// Isolates `0`, then `1` inside the part set aside for it, and so on up to
/// `ell - 1`, drawing each cut uniformly inside the working component.
pub fn isolate_first_ell<R: Rng + ?Sized>(
    tree: &IncreasingTree,
    ell: usize,
    rng: &mut R,
) -> Result<MultiIsolationResult> {
    let n = tree.n_edges();
    if ell == 0 || ell > n + 1 {
        return Err(invalid(format!("ell = {ell} outside 1..={}", n + 1)));
    }
    let mut forest = Forest::new(tree);
    let mut per_stage_cuts = Vec::with_capacity(ell);
    let mut stage_sizes = Vec::with_capacity(ell);
    for stage in 0..ell {
        let working = forest.comp[stage];
        stage_sizes.push(forest.size_of(working));
        let mut cuts = 0;
        loop {
            let working = forest.comp[stage];
            let eligible = forest.edges_where(|c| c == working);
            if eligible.is_empty() {
                break;
            }
            forest.cut(eligible[rng.random_range(0..eligible.len())]);
            cuts += 1;
        }
        per_stage_cuts.push(cuts);
    }
    Ok(MultiIsolationResult {
        total_cuts: per_stage_cuts.iter().sum(),
        per_stage_cuts,
        stage_sizes,
    })
}
