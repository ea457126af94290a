//! Cut-trees: the binary tree of blocks recording a destruction.
//!
//! The root is the full vertex set; removing an edge splits a block into the
//! part holding the block's smallest vertex (left child) and the other part
//! (right child). Leaves are the singletons, so the depth of leaf `{v}` is
//! the number of removals that hit a component containing `v`.
//!
//! Nodes `0..=n` are the leaves (node `v` is `{v}`); the internal node created
//! by removal step `s` has id `n + 1 + s`, so parents always precede their
//! internal children. Blocks are not stored: the leaves are kept in depth-first
//! order and every node owns a contiguous range of it.

use std::fmt::Write;

use crate::destruction::DestructionTrace;
use crate::dsu::DisjointSets;
use crate::error::{invalid, Error, Result};
use crate::tree::{IncreasingTree, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutNode {
    pub size: usize,
    /// `(left, right)` for internal nodes.
    pub children: Option<(usize, usize)>,
    pub parent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutTree {
    nodes: Vec<CutNode>,
    root: usize,
    depth: Vec<usize>,
    leaf_order: Vec<usize>,
    span: Vec<(usize, usize)>,
}

/// The root-to-`{0}` path of a cut-tree and the subtrees hanging off it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrunkDecomposition {
    /// Node ids from the root down to the leaf `{0}`.
    pub trunk: Vec<usize>,
    /// Height of each branch, in trunk order (0 for a single leaf).
    pub branch_depths: Vec<usize>,
}

impl TrunkDecomposition {
    /// Number of edges on the trunk, which is `X_n`.
    pub fn trunk_length(&self) -> usize {
        self.trunk.len() - 1
    }

    pub fn max_branch_depth(&self) -> usize {
        self.branch_depths.iter().copied().max().unwrap_or(0)
    }
}

impl CutTree {
    /// Builds from a list of joins given in reverse removal order.
    fn from_joins(n_vertices: usize, joins: impl Iterator<Item = (usize, usize)>) -> Result<Self> {
        let n = n_vertices - 1;
        let mut nodes: Vec<CutNode> = (0..2 * n + 1)
            .map(|_| CutNode {
                size: 1,
                children: None,
                parent: None,
            })
            .collect();
        let mut sets = DisjointSets::new(n_vertices);
        let mut node_of: Vec<usize> = (0..n_vertices).collect();
        let mut id = 2 * n + 1;
        for (a, b) in joins {
            let (ra, rb) = (sets.find(a), sets.find(b));
            if ra == rb {
                return Err(Error::NotATree(format!("edge {a}-{b} closes a cycle")));
            }
            let (l, r) = if sets.min_of_root(ra) < sets.min_of_root(rb) {
                (ra, rb)
            } else {
                (rb, ra)
            };
            id -= 1;
            let (nl, nr) = (node_of[l], node_of[r]);
            nodes[id].size = nodes[nl].size + nodes[nr].size;
            nodes[id].children = Some((nl, nr));
            nodes[nl].parent = Some(id);
            nodes[nr].parent = Some(id);
            let root = sets.union(l, r);
            node_of[root] = id;
        }
        Ok(Self::finish(nodes, if n == 0 { 0 } else { n + 1 }))
    }

    fn finish(nodes: Vec<CutNode>, root: usize) -> Self {
        let mut depth = vec![0; nodes.len()];
        let mut span = vec![(0, 0); nodes.len()];
        let mut leaf_order = Vec::with_capacity(nodes.len() / 2 + 1);
        // Iterative DFS, left child first; the second visit closes the range.
        let mut stack = vec![(root, false)];
        while let Some((v, closing)) = stack.pop() {
            if closing {
                span[v].1 = leaf_order.len();
                continue;
            }
            span[v].0 = leaf_order.len();
            match nodes[v].children {
                None => {
                    leaf_order.push(v);
                    span[v].1 = leaf_order.len();
                }
                Some((l, r)) => {
                    depth[l] = depth[v] + 1;
                    depth[r] = depth[v] + 1;
                    stack.push((v, true));
                    stack.push((r, false));
                    stack.push((l, false));
                }
            }
        }
        Self {
            nodes,
            root,
            depth,
            leaf_order,
            span,
        }
    }

    /// Cut-tree of an arbitrary tree on `0..n_vertices` whose edges are listed
    /// in removal order.
    pub fn from_edges(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::EmptyVertexSet);
        }
        if edges.len() + 1 != n_vertices {
            return Err(Error::NotATree(format!(
                "{} edges on {n_vertices} vertices",
                edges.len()
            )));
        }
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a.max(b) >= n_vertices) {
            return Err(Error::VertexOutOfRange {
                vertex: a.max(b),
                max: n_vertices - 1,
            });
        }
        Self::from_joins(n_vertices, edges.iter().rev().copied())
    }

    pub fn n_vertices(&self) -> usize {
        self.nodes.len() / 2 + 1
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> &CutNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[CutNode] {
        &self.nodes
    }

    /// Node id of the leaf `{v}`.
    pub fn leaf(&self, v: usize) -> usize {
        v
    }

    pub fn depth(&self, id: usize) -> usize {
        self.depth[id]
    }

    /// Depths of the leaves `{0}, ..., {n}`.
    pub fn leaf_depths(&self) -> &[usize] {
        &self.depth[..self.n_vertices()]
    }

    /// The vertices of a block, sorted.
    pub fn block(&self, id: usize) -> Vec<usize> {
        let (a, b) = self.span[id];
        let mut block = self.leaf_order[a..b].to_vec();
        block.sort_unstable();
        block
    }

    /// Shape with leaves as `.` and internal nodes as `(LR)`.
    pub fn shape(&self) -> String {
        self.render(&mut |_, out| out.push('.'))
    }

    /// Like [`shape`](Self::shape) with leaf labels: `(0 (1 2))`.
    pub fn labeled_shape(&self) -> String {
        self.render(&mut |v, out| {
            let _ = write!(out, "{v}");
        })
    }

    fn render(&self, leaf: &mut dyn FnMut(usize, &mut String)) -> String {
        enum Item {
            Node(usize),
            Gap,
            Close,
        }
        let mut probe = String::new();
        leaf(0, &mut probe);
        let spaced = probe != ".";
        let mut out = String::new();
        let mut stack = vec![Item::Node(self.root)];
        while let Some(item) = stack.pop() {
            match item {
                Item::Close => out.push(')'),
                Item::Gap => out.push(' '),
                Item::Node(v) => match self.nodes[v].children {
                    None => leaf(v, &mut out),
                    Some((l, r)) => {
                        out.push('(');
                        stack.push(Item::Close);
                        stack.push(Item::Node(r));
                        if spaced {
                            stack.push(Item::Gap);
                        }
                        stack.push(Item::Node(l));
                    }
                },
            }
        }
        out
    }

    /// Height of every subtree, computed bottom-up.
    fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.nodes.len()];
        for id in (self.n_vertices()..self.nodes.len()).rev() {
            if let Some((l, r)) = self.nodes[id].children {
                h[id] = 1 + h[l].max(h[r]);
            }
        }
        h
    }

    /// Unordered form: every internal node as the sorted pair of its child
    /// blocks. Used to compare cut-trees regardless of child order.
    pub fn unordered_blocks(&self) -> Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> {
        let mut out: Vec<_> = (self.n_vertices()..self.nodes.len())
            .filter_map(|id| {
                let (l, r) = self.nodes[id].children?;
                let (a, b) = (self.block(l), self.block(r));
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                Some((self.block(id), a, b))
            })
            .collect();
        out.sort();
        out
    }
}

/// Cut-tree of a destruction trace.
pub fn build_cut_tree(trace: &DestructionTrace) -> CutTree {
    let parent = trace.tree().parents();
    CutTree::from_joins(
        parent.len(),
        trace.order().iter().rev().map(|&e| (parent[e], e)),
    )
    .expect("an increasing tree has no cycles")
}

/// Edges of the smallest subtree joining the root to the leaves of `targets`.
/// Equals the target isolation count plus `|targets| - 1`.
pub fn reduced_length(ct: &CutTree, targets: &VertexSet) -> Result<usize> {
    if targets.max() >= ct.n_vertices() {
        return Err(Error::VertexOutOfRange {
            vertex: targets.max(),
            max: ct.n_vertices() - 1,
        });
    }
    let mut seen = vec![false; ct.nodes.len()];
    seen[ct.root] = true;
    let mut edges = 0;
    for &t in targets.members() {
        let mut v = ct.leaf(t);
        while !seen[v] {
            seen[v] = true;
            edges += 1;
            v = ct.nodes[v].parent.expect("non-root node has a parent");
        }
    }
    Ok(edges)
}

pub fn trunk_decomposition(ct: &CutTree) -> TrunkDecomposition {
    let heights = ct.heights();
    let mut trunk = vec![ct.root];
    let mut branch_depths = Vec::new();
    let mut v = ct.root;
    while let Some((l, r)) = ct.nodes[v].children {
        // The left child always holds the smallest vertex, hence 0.
        branch_depths.push(heights[r]);
        trunk.push(l);
        v = l;
    }
    TrunkDecomposition {
        trunk,
        branch_depths,
    }
}

/// Cut-tree of the ordered destruction (edge `i` removed at step `i`), grown
/// vertex by vertex: adding `i` under `p` turns the leaf `{p}` into the block
/// `{p, i}` with children `{p}` and `{i}`, and adds `i` to every block above.
pub fn build_ordered_cut_tree(tree: &IncreasingTree) -> CutTree {
    let parent = tree.parents();
    let n = tree.n_edges();
    let mut nodes: Vec<CutNode> = (0..2 * n + 1)
        .map(|_| CutNode {
            size: 1,
            children: None,
            parent: None,
        })
        .collect();
    let mut root = 0;
    for i in 1..=n {
        let p = parent[i];
        // The block {p, i} is split by step i, so it gets that step's id.
        let id = n + i;
        let above = nodes[p].parent;
        match above {
            None => root = id,
            Some(u) => {
                let (l, r) = nodes[u].children.expect("parent is internal");
                nodes[u].children = Some(if l == p { (id, r) } else { (l, id) });
            }
        }
        nodes[id] = CutNode {
            size: 2,
            children: Some((p, i)),
            parent: above,
        };
        nodes[p].parent = Some(id);
        nodes[i].parent = Some(id);
        let mut up = above;
        while let Some(u) = up {
            nodes[u].size += 1;
            up = nodes[u].parent;
        }
    }
    CutTree::finish(nodes, root)
}

/// Leaf depths of the ordered cut-tree without building it: adding `i` under
/// `p` puts `{i}` one level below the old leaf `{p}` and pushes `{p}` down by
/// one.
pub fn ordered_leaf_depths(tree: &IncreasingTree) -> Vec<usize> {
    let parent = tree.parents();
    let mut depth = vec![0usize; parent.len()];
    for i in 1..parent.len() {
        let p = parent[i];
        depth[i] = depth[p] + 1;
        depth[p] += 1;
    }
    depth
}

/// `(height, saturation level)`: the largest and smallest leaf depth.
pub fn bst_height_saturation(ct: &CutTree) -> (usize, usize) {
    height_saturation_of(ct.leaf_depths())
}

pub fn height_saturation_of(depths: &[usize]) -> (usize, usize) {
    let max = depths.iter().copied().max().unwrap_or(0);
    let min = depths.iter().copied().min().unwrap_or(0);
    (max, min)
}

/// Shapes of cut-trees use `.` for leaves; a leaf count check for callers
/// parsing them.
pub fn shape_leaves(shape: &str) -> Result<usize> {
    let leaves = shape.chars().filter(|&c| c == '.').count();
    if leaves == 0 {
        return Err(invalid("shape has no leaves"));
    }
    Ok(leaves)
}
