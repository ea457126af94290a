use crate::dsu::DisjointSets;
use crate::error::{invalid, Error, Result};
use crate::tree::VertexSet;

use super::DestructionTrace;

/// What a single removal did, seen from a set of target vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TargetStep {
    pub edge: usize,
    /// Targets in the part that keeps the component's smallest vertex.
    pub root_side_targets: usize,
    /// Targets in the detached subtree.
    pub detached_targets: usize,
    pub root_side_size: usize,
    pub detached_size: usize,
    /// Smallest vertex of the component the edge was removed from.
    pub component_min: usize,
}

impl TargetStep {
    pub fn component_targets(&self) -> usize {
        self.root_side_targets + self.detached_targets
    }

    /// The removal separated two targets.
    pub fn splits_targets(&self) -> bool {
        self.root_side_targets > 0 && self.detached_targets > 0
    }
}

fn check_targets(trace: &DestructionTrace, targets: &VertexSet) -> Result<()> {
    let n = trace.n_edges();
    if targets.max() > n {
        return Err(Error::VertexOutOfRange {
            vertex: targets.max(),
            max: n,
        });
    }
    Ok(())
}

/// Per-step bookkeeping of the whole destruction, in forward order.
///
/// Removals are replayed backwards as unions: just before edge `e` is removed
/// its component is the union of the two sides that exist right after, and
/// those sides are exactly the sets joined when `e` is added back. The whole
/// replay costs `O(n α(n))`.
pub fn replay_targets(trace: &DestructionTrace, targets: &VertexSet) -> Result<Vec<TargetStep>> {
    check_targets(trace, targets)?;
    let parent = trace.tree().parents();
    let n1 = parent.len();
    let mut sets = DisjointSets::new(n1);
    let mut count = vec![0usize; n1];
    for &t in targets.members() {
        count[t] = 1;
    }
    let mut steps = vec![TargetStep::default(); n1 - 1];
    for (s, &e) in trace.order().iter().enumerate().rev() {
        let ra = sets.find(parent[e]);
        let rb = sets.find(e);
        steps[s] = TargetStep {
            edge: e,
            root_side_targets: count[ra],
            detached_targets: count[rb],
            root_side_size: sets.size_of_root(ra),
            detached_size: sets.size_of_root(rb),
            component_min: sets.min_of_root(ra),
        };
        let r = sets.union(ra, rb);
        count[r] = count[ra] + count[rb];
    }
    Ok(steps)
}

/// Number of removals that fall in a component containing at least one
/// target, i.e. the cuts needed to isolate every target.
pub fn isolate_targets(trace: &DestructionTrace, targets: &VertexSet) -> Result<usize> {
    Ok(replay_targets(trace, targets)?
        .iter()
        .filter(|s| s.component_targets() >= 1)
        .count())
}

/// `A_{n,2} <= ... <= A_{n,l}` for `l = |targets|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisconnectionResult {
    /// `counts[k - 2]` is the number of counted removals until the targets
    /// first occupy `k` distinct components.
    pub counts: Vec<usize>,
}

impl DisconnectionResult {
    /// `A_{n,k}` for `2 <= k <= l`.
    pub fn a(&self, k: usize) -> Option<usize> {
        k.checked_sub(2).and_then(|i| self.counts.get(i).copied())
    }
}

/// Disconnection of the targets: only removals in components holding at
/// least two targets are counted.
pub fn disconnect_targets(
    trace: &DestructionTrace,
    targets: &VertexSet,
) -> Result<DisconnectionResult> {
    if targets.len() < 2 {
        return Err(invalid("disconnection needs at least two targets"));
    }
    let steps = replay_targets(trace, targets)?;
    let mut counted = 0;
    let mut counts = Vec::with_capacity(targets.len() - 1);
    for s in &steps {
        if s.component_targets() >= 2 {
            counted += 1;
        }
        if s.splits_targets() {
            counts.push(counted);
            if counts.len() == targets.len() - 1 {
                break;
            }
        }
    }
    Ok(DisconnectionResult { counts })
}

/// Outcome of isolating `0, 1, ..., l - 1` one after the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIsolationResult {
    /// `X'_{n,l}`.
    pub total_cuts: usize,
    /// Cuts spent isolating vertex `i` inside its set-aside component; entry
    /// 0 is `X_n` and entry `i >= 1` is the increment `Delta_{n,i}`.
    pub per_stage_cuts: Vec<usize>,
    /// Size of the component vertex `i` is isolated from at the start of its
    /// stage.
    pub stage_sizes: Vec<usize>,
}

impl MultiIsolationResult {
    /// `X'_{n,1} <= X'_{n,2} <= ... <= X'_{n,l}`.
    pub fn partial_sums(&self) -> Vec<usize> {
        self.per_stage_cuts
            .iter()
            .scan(0, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }

    /// `Delta_{n,i} = X'_{n,i+1} - X'_{n,i}` for `i = 1..l-1`.
    pub fn increments(&self) -> &[usize] {
        &self.per_stage_cuts[1..]
    }
}

/// Isolates the root while setting aside severed subtrees that contain one of
/// `1..l-1` (others are discarded), then resumes with the set-aside subtree
/// containing 1, and so on up to `l - 1`. A stage whose vertex is already a
/// singleton contributes no cut.
pub fn isolate_first_ell(trace: &DestructionTrace, ell: usize) -> Result<MultiIsolationResult> {
    let tree = trace.tree();
    let n = tree.n_edges();
    if ell == 0 || ell > n + 1 {
        return Err(invalid(format!("ell = {ell} outside 1..={}", n + 1)));
    }
    let children = tree.children();
    let n1 = n + 1;
    let mut label = vec![0u32; n1];
    let mut sizes = vec![n1];
    let mut cut = vec![false; n1];
    let mut per_stage_cuts = Vec::with_capacity(ell);
    let mut stage_sizes = Vec::with_capacity(ell);
    let mut stack = Vec::new();
    let mut detached = Vec::new();
    for stage in 0..ell {
        let working = label[stage];
        stage_sizes.push(sizes[working as usize]);
        let mut cuts = 0;
        if sizes[working as usize] > 1 {
            for &e in trace.order() {
                if cut[e] || label[e] != working {
                    continue;
                }
                cut[e] = true;
                cuts += 1;
                let fresh = sizes.len() as u32;
                detached.clear();
                stack.push(e);
                label[e] = fresh;
                while let Some(v) = stack.pop() {
                    detached.push(v);
                    for &c in children.of(v) {
                        if !cut[c] && label[c] == working {
                            label[c] = fresh;
                            stack.push(c);
                        }
                    }
                }
                sizes[working as usize] -= detached.len();
                // Discarded parts get a fresh label too; no later stage looks
                // at them because they hold no target.
                sizes.push(detached.len());
                if sizes[working as usize] == 1 {
                    break;
                }
            }
        }
        per_stage_cuts.push(cuts);
    }
    Ok(MultiIsolationResult {
        total_cuts: per_stage_cuts.iter().sum(),
        per_stage_cuts,
        stage_sizes,
    })
}
