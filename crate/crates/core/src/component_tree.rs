//! The tree of component sizes of a destruction.
//!
//! Every component ever produced is an individual, named after its smallest
//! vertex: the root individual is `0` (the whole tree), and removing edge `e`
//! creates individual `e` (the detached subtree, rooted at `e`) as the next
//! child of the individual it was cut from. The type of an individual is its
//! size when created, which is also one plus the sum of its children's types.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::destruction::{replay_targets, DestructionTrace};
use crate::error::{invalid, Result};
use crate::tree::VertexSet;

/// A node of the universal tree: the empty path is the root and `u j` is
/// the `j`-th child of `u` (1-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UniversalIndex(Vec<usize>);

impl UniversalIndex {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn new(path: Vec<usize>) -> Result<Self> {
        if path.contains(&0) {
            return Err(invalid("universal tree indices are 1-based"));
        }
        Ok(Self(path))
    }

    pub fn generation(&self) -> usize {
        self.0.len()
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    pub fn child(&self, j: usize) -> Result<Self> {
        let mut p = self.0.clone();
        p.push(j);
        Self::new(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSizeTree {
    /// Individual each individual was cut from; `parent[0] = 0`.
    parent: Vec<usize>,
    size: Vec<usize>,
    generation: Vec<usize>,
    /// Children in creation order, as CSR.
    offsets: Vec<usize>,
    kids: Vec<usize>,
}

impl ComponentSizeTree {
    fn from_parts(parent: Vec<usize>, size: Vec<usize>, creation: &[usize]) -> Self {
        let n1 = parent.len();
        let mut offsets = vec![0usize; n1 + 1];
        for &v in creation {
            offsets[parent[v] + 1] += 1;
        }
        for i in 0..n1 {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut kids = vec![0usize; creation.len()];
        let mut generation = vec![0usize; n1];
        for &v in creation {
            let p = parent[v];
            kids[fill[p]] = v;
            fill[p] += 1;
            // Parents are created before their children.
            generation[v] = generation[p] + 1;
        }
        Self {
            parent,
            size,
            generation,
            offsets,
            kids,
        }
    }

    pub fn n_individuals(&self) -> usize {
        self.parent.len()
    }

    /// Parent individual, `None` for the root.
    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v])
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn size(&self, v: usize) -> usize {
        self.size[v]
    }

    pub fn generation(&self, v: usize) -> usize {
        self.generation[v]
    }

    /// Children of `v` in creation order.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.kids[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn child_sizes(&self, v: usize) -> Vec<usize> {
        self.children(v).iter().map(|&c| self.size[c]).collect()
    }

    /// Individual at a universal-tree index, following creation order.
    pub fn node_at(&self, u: &UniversalIndex) -> Option<usize> {
        let mut v = 0;
        for &j in u.path() {
            v = *self.children(v).get(j - 1)?;
        }
        Some(v)
    }

    /// `B_u`, zero for absent individuals.
    pub fn size_at(&self, u: &UniversalIndex) -> usize {
        self.node_at(u).map_or(0, |v| self.size[v])
    }
}

/// Tree of component sizes of a trace.
pub fn build_component_tree(trace: &DestructionTrace) -> ComponentSizeTree {
    let steps = replay_targets(trace, &VertexSet::single(0)).expect("vertex 0 exists");
    let n1 = trace.n_edges() + 1;
    let mut parent = vec![0usize; n1];
    let mut size = vec![0usize; n1];
    size[0] = n1;
    let mut creation = Vec::with_capacity(n1 - 1);
    for s in &steps {
        parent[s.edge] = s.component_min;
        size[s.edge] = s.detached_size;
        creation.push(s.edge);
    }
    ComponentSizeTree::from_parts(parent, size, &creation)
}

/// Children ranked by decreasing size with the generation-`k` values scaled
/// by `(ln n)^k / n`.
#[derive(Clone, Debug)]
pub struct RankedNormalizedTree<'a> {
    tree: &'a ComponentSizeTree,
    /// Same layout as the tree's CSR children, reordered by rank.
    ranked: Vec<usize>,
    ln_n: f64,
    n: f64,
}

impl<'a> RankedNormalizedTree<'a> {
    pub fn tree(&self) -> &'a ComponentSizeTree {
        self.tree
    }

    /// Children of `v` by decreasing size.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.ranked[self.tree.offsets[v]..self.tree.offsets[v + 1]]
    }

    /// `Z_u` for the individual `v`.
    pub fn value(&self, v: usize) -> f64 {
        self.ln_n.powi(self.tree.generation[v] as i32) * self.tree.size[v] as f64 / self.n
    }

    /// Individual at a universal-tree index, following rank order.
    pub fn node_at(&self, u: &UniversalIndex) -> Option<usize> {
        let mut v = 0;
        for &j in u.path() {
            v = *self.children(v).get(j - 1)?;
        }
        Some(v)
    }

    /// `Z_u`, zero for absent individuals.
    pub fn value_at(&self, u: &UniversalIndex) -> f64 {
        self.node_at(u).map_or(0.0, |v| self.value(v))
    }
}

/// Ranks children by decreasing size, ties in uniform random order, and
/// attaches the normalization. Needs `n >= 2`.
pub fn rank_and_normalize<'a, R: Rng + ?Sized>(
    tree: &'a ComponentSizeTree,
    rng: &mut R,
) -> Result<RankedNormalizedTree<'a>> {
    let n = tree.n_individuals() - 1;
    if n < 2 {
        return Err(invalid("normalization needs n >= 2"));
    }
    let mut ranked = tree.kids.clone();
    for v in 0..tree.n_individuals() {
        let block = &mut ranked[tree.offsets[v]..tree.offsets[v + 1]];
        if block.len() > 1 {
            // A uniform shuffle followed by a stable sort ranks equal sizes
            // uniformly.
            block.shuffle(rng);
            block.sort_by(|&a, &b| tree.size[b].cmp(&tree.size[a]));
        }
    }
    Ok(RankedNormalizedTree {
        tree,
        ranked,
        ln_n: (n as f64).ln(),
        n: n as f64,
    })
}

/// The `top_j` largest normalized values of generation `k`, read as the
/// ranked children of the individual `(1, ..., 1)` of generation `k - 1`.
pub fn generation_slice(rt: &RankedNormalizedTree, k: usize, top_j: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(invalid("generation must be at least 1"));
    }
    let u = UniversalIndex(vec![1; k - 1]);
    Ok(match rt.node_at(&u) {
        None => Vec::new(),
        Some(v) => rt.children(v).iter().take(top_j).map(|&c| rt.value(c)).collect(),
    })
}
