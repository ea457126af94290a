//! Coalescent read off the destruction of a recursive tree on `{1, ..., n}`:
//! every edge carries an exponential clock, and when the clock of a live edge
//! rings the distal subtree is deleted and its labels are merged into the
//! proximal endpoint. Blocks are the label sets of the surviving vertices.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::tree::IncreasingTree;

use super::DestructionTrace;

/// Label sets are kept only up to this many vertices.
pub const LABEL_SET_CAP: usize = 10_000;

/// One collision event.
#[derive(Clone, Debug, PartialEq)]
pub struct Merge {
    pub time: f64,
    /// Label (`1..=n`) of the vertex the detached blocks merge into.
    pub into: usize,
    /// Number of blocks merged into it.
    pub absorbed: usize,
    /// The resulting block, when label sets are tracked.
    pub block: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoalescentRun {
    /// `(time, number of blocks)`, starting with `(0, n)` and ending at one
    /// block.
    pub jumps: Vec<(f64, usize)>,
    pub merges: Vec<Merge>,
}

impl CoalescentRun {
    pub fn collisions(&self) -> usize {
        self.merges.len()
    }
}

fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -(1.0 - rng.random::<f64>()).ln()
}

/// Runs the coalescent on `tree`, whose vertex `v` carries label `v + 1`.
pub fn gm_coalescent<R: Rng + ?Sized>(tree: &IncreasingTree, rng: &mut R) -> Result<CoalescentRun> {
    let n = tree.n_vertices();
    if n < 2 {
        return Err(invalid("the coalescent needs at least two vertices"));
    }
    let times: Vec<f64> = (0..tree.n_edges()).map(|_| exp1(rng)).collect();
    let trace = DestructionTrace::from_times(tree.clone(), &times)?;
    Ok(coalescent_from_trace(&trace))
}

/// The coalescent driven by a fixed removal order. Removal `s` happens at the
/// edge's time if the trace has times, at time `s + 1` otherwise.
pub fn coalescent_from_trace(trace: &DestructionTrace) -> CoalescentRun {
    let tree = trace.tree();
    let n = tree.n_vertices();
    let clock: Vec<f64> = match trace.times() {
        Some(t) => t.to_vec(),
        None => {
            let mut c = vec![0.0; n];
            for (s, &e) in trace.order().iter().enumerate() {
                c[e] = (s + 1) as f64;
            }
            c
        }
    };
    let children = tree.children();
    let track = n <= LABEL_SET_CAP;
    let mut labels: Vec<Vec<usize>> = if track {
        (1..=n).map(|l| vec![l]).collect()
    } else {
        Vec::new()
    };
    let mut alive = vec![true; n];
    let mut blocks = n;
    let mut jumps = vec![(0.0, n)];
    let mut merges = Vec::new();
    let mut stack = Vec::new();
    let parent = tree.parents();
    for &e in trace.order() {
        if !alive[e] {
            continue;
        }
        let p = parent[e];
        let mut absorbed = 0;
        stack.push(e);
        alive[e] = false;
        while let Some(v) = stack.pop() {
            absorbed += 1;
            if track {
                let moved = std::mem::take(&mut labels[v]);
                labels[p].extend(moved);
            }
            for &c in children.of(v) {
                if alive[c] {
                    alive[c] = false;
                    stack.push(c);
                }
            }
        }
        blocks -= absorbed;
        jumps.push((clock[e], blocks));
        let block = track.then(|| {
            labels[p].sort_unstable();
            labels[p].clone()
        });
        merges.push(Merge {
            time: clock[e],
            into: p + 1,
            absorbed,
            block,
        });
    }
    CoalescentRun { jumps, merges }
}
