//! The destruction process: edges removed one at a time in a uniform random
//! order, and the cut-counting statistics read off it.
//!
//! A [`DestructionTrace`] fixes a tree and a removal order. Every statistic
//! here is a deterministic function of the trace, so statistics computed on
//! the same trace are coupled pathwise. The staged algorithms that pick an
//! edge uniformly inside the components they retain are realized by filtering
//! the one global order; [`direct`] holds literal implementations of those
//! algorithms used to check that equivalence.

pub mod coalescent;
pub mod direct;
mod targets;
mod vertex;

pub use coalescent::{coalescent_from_trace, gm_coalescent, CoalescentRun, Merge};
pub use targets::{
    disconnect_targets, isolate_first_ell, isolate_targets, replay_targets, DisconnectionResult,
    MultiIsolationResult, TargetStep,
};
pub use vertex::{isolate_root_by_vertex_removal, ordered_root_isolation_count};

use rand::Rng;

use crate::error::{Error, Result};
use crate::tree::IncreasingTree;

/// A tree together with a removal order of its edges.
///
/// Edge ids are child endpoints `1..=n`. When removal times are present they
/// are stored per edge id and `order` lists the edges by increasing time,
/// ties broken by edge id.
#[derive(Clone, Debug, PartialEq)]
pub struct DestructionTrace {
    tree: IncreasingTree,
    order: Vec<usize>,
    times: Option<Vec<f64>>,
}

impl DestructionTrace {
    /// A trace with an explicit removal order (a permutation of `1..=n`).
    pub fn from_order(tree: IncreasingTree, order: Vec<usize>) -> Result<Self> {
        let n = tree.n_edges();
        if order.len() != n {
            return Err(Error::InvalidTrace(format!(
                "order has {} entries for {n} edges",
                order.len()
            )));
        }
        let mut seen = vec![false; n + 1];
        for &e in &order {
            if e == 0 || e > n || seen[e] {
                return Err(Error::InvalidTrace(format!("order is not a permutation of 1..={n}")));
            }
            seen[e] = true;
        }
        Ok(Self {
            tree,
            order,
            times: None,
        })
    }

    /// A trace from removal times listed for edges `1..=n` in that order.
    pub fn from_times(tree: IncreasingTree, times: &[f64]) -> Result<Self> {
        let n = tree.n_edges();
        if times.len() != n {
            return Err(Error::InvalidTrace(format!(
                "{} times for {n} edges",
                times.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidTrace("removal times must be finite".into()));
        }
        let mut by_edge = Vec::with_capacity(n + 1);
        by_edge.push(f64::INFINITY);
        by_edge.extend_from_slice(times);
        let order = argsort_times(&by_edge);
        Ok(Self {
            tree,
            order,
            times: Some(by_edge),
        })
    }

    /// The ordered destruction: edge `i` is removed at step `i`.
    pub fn natural(tree: IncreasingTree) -> Self {
        let order = (1..=tree.n_edges()).collect();
        Self {
            tree,
            order,
            times: None,
        }
    }

    pub fn tree(&self) -> &IncreasingTree {
        &self.tree
    }

    pub fn n_edges(&self) -> usize {
        self.tree.n_edges()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Removal times indexed by edge id; slot 0 holds `+inf`.
    pub fn times(&self) -> Option<&[f64]> {
        self.times.as_deref()
    }

    /// Step (0-based) at which each edge is removed, indexed by edge id.
    pub fn steps(&self) -> Vec<usize> {
        let mut step = vec![usize::MAX; self.n_edges() + 1];
        for (s, &e) in self.order.iter().enumerate() {
            step[e] = s;
        }
        step
    }
}

/// Uniform removal order with i.i.d. uniform(0,1) marks on the edges.
pub fn sample_destruction<R: Rng + ?Sized>(
    tree: IncreasingTree,
    rng: &mut R,
) -> Result<DestructionTrace> {
    let n = tree.n_edges();
    if n == 0 {
        return Err(Error::InvalidTrace("cannot destroy a tree without edges".into()));
    }
    let mut times = Vec::with_capacity(n + 1);
    times.push(f64::INFINITY);
    times.extend((0..n).map(|_| rng.random::<f64>()));
    let order = argsort_times(&times);
    Ok(DestructionTrace {
        tree,
        order,
        times: Some(times),
    })
}

/// Edge ids `1..` sorted by `(time, id)`. Slot 0 of `times` is ignored.
fn argsort_times(times: &[f64]) -> Vec<usize> {
    let n = times.len() - 1;
    let unit = times[1..].iter().all(|&t| (0.0..1.0).contains(&t));
    if !unit || n < 64 {
        let mut order: Vec<usize> = (1..=n).collect();
        order.sort_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)));
        return order;
    }
    // Bucket sort: expected O(n) for uniform marks.
    let mut count = vec![0usize; n + 1];
    let bucket = |t: f64| ((t * n as f64) as usize).min(n - 1);
    for &t in &times[1..] {
        count[bucket(t) + 1] += 1;
    }
    for b in 0..n {
        count[b + 1] += count[b];
    }
    let mut order = vec![0usize; n];
    for (e, &t) in times.iter().enumerate().skip(1) {
        let b = bucket(t);
        order[count[b]] = e;
        count[b] += 1;
    }
    let mut start = 0;
    for &end in &count[..n] {
        if end - start > 1 {
            order[start..end].sort_by(|&a, &c| times[a].total_cmp(&times[c]).then(a.cmp(&c)));
        }
        start = end;
    }
    order
}

/// Outcome of isolating the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationResult {
    /// `X_n`, the number of cuts falling in the root component.
    pub cuts: usize,
    /// Sizes of the subtrees severed from the root, in severance order.
    pub severed_sizes: Vec<usize>,
}

/// Replays the trace, skipping removals outside the current root component.
pub fn isolate_root(trace: &DestructionTrace) -> IsolationResult {
    let tree = trace.tree();
    let children = tree.children();
    let mut in_root = vec![true; tree.n_vertices()];
    let mut severed_sizes = Vec::new();
    let mut stack = Vec::new();
    for &e in trace.order() {
        if !in_root[e] {
            continue;
        }
        in_root[e] = false;
        stack.push(e);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &c in children.of(v) {
                if in_root[c] {
                    in_root[c] = false;
                    stack.push(c);
                }
            }
        }
        severed_sizes.push(size);
    }
    IsolationResult {
        cuts: severed_sizes.len(),
        severed_sizes,
    }
}

/// `X_n` in one sweep: edge `i` is cut in the root component iff its time is
/// below every time on the path from `parent(i)` up to the root.
pub fn isolate_root_fast(trace: &DestructionTrace) -> Result<usize> {
    let times = trace.times().ok_or(Error::MissingTimes)?;
    Ok(isolation_sweep(trace.tree().parents(), times))
}

/// Like [`isolate_root_fast`] but also recovers the severed sizes: vertex `v`
/// leaves the root component with the edge of smallest time on its root
/// path.
pub fn isolate_root_fast_with_sizes(trace: &DestructionTrace) -> Result<IsolationResult> {
    let times = trace.times().ok_or(Error::MissingTimes)?;
    let parent = trace.tree().parents();
    let n1 = parent.len();
    let mut path_min = vec![f64::INFINITY; n1];
    let mut severed_by = vec![0usize; n1];
    let mut size = vec![0usize; n1];
    let mut cut_edges = Vec::new();
    for i in 1..n1 {
        let p = parent[i];
        if times[i] < path_min[p] {
            path_min[i] = times[i];
            severed_by[i] = i;
            cut_edges.push(i);
        } else {
            path_min[i] = path_min[p];
            severed_by[i] = severed_by[p];
        }
        size[severed_by[i]] += 1;
    }
    // Ties never reach this sort: times on one root path are compared
    // strictly above, and distinct cut edges lie on distinct branches.
    cut_edges.sort_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)));
    Ok(IsolationResult {
        cuts: cut_edges.len(),
        severed_sizes: cut_edges.iter().map(|&e| size[e]).collect(),
    })
}

/// Root-isolation count from a parent array and per-edge times (slot 0 is
/// ignored).
pub fn isolation_sweep(parent: &[usize], times: &[f64]) -> usize {
    let mut path_min = vec![f64::INFINITY; parent.len()];
    let mut cuts = 0;
    for i in 1..parent.len() {
        let above = path_min[parent[i]];
        if times[i] < above {
            cuts += 1;
            path_min[i] = times[i];
        } else {
            path_min[i] = above;
        }
    }
    cuts
}

/// Samples a uniform recursive tree and uniform removal marks on the fly and
/// returns `X_n`, without materializing the tree. O(n) time, one `f64` per
/// vertex of memory.
pub fn sample_isolation_count<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    let mut path_min = vec![f64::INFINITY; n + 1];
    let mut cuts = 0;
    for i in 1..=n {
        let above = path_min[rng.random_range(0..i)];
        let t: f64 = rng.random();
        if t < above {
            cuts += 1;
            path_min[i] = t;
        } else {
            path_min[i] = above;
        }
    }
    cuts
}
