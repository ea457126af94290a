//! Increasing trees on `{0, 1, ..., n}`.
//!
//! A tree is stored as a flat parent array: `parent[i] < i` for every
//! `i >= 1` and the root slot `parent[0]` holds `0` by convention. Edges are
//! named by their child endpoint, so edge `i` joins `i` to `parent[i]` and the
//! edge ids are exactly `1..=n`.

use rand::Rng;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_increasing_trees`] (8! = 40320 trees).
pub const ENUMERATION_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncreasingTree {
    parent: Vec<usize>,
}

impl IncreasingTree {
    /// Builds a tree from a full parent array of length `n + 1`. The root
    /// slot must hold `0`.
    pub fn from_parents(parent: Vec<usize>) -> Result<Self> {
        if parent.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        if parent[0] != 0 {
            return Err(Error::NotATree("root slot must hold 0".into()));
        }
        if let Some(i) = (1..parent.len()).find(|&i| parent[i] >= i) {
            return Err(Error::NotATree(format!(
                "parent[{i}] = {} is not smaller than {i}",
                parent[i]
            )));
        }
        Ok(Self { parent })
    }

    /// The singleton tree `{0}`.
    pub fn singleton() -> Self {
        Self { parent: vec![0] }
    }

    /// The path `0 - 1 - ... - n`.
    pub fn path(n: usize) -> Self {
        Self {
            parent: (0..=n).map(|i| i.saturating_sub(1)).collect(),
        }
    }

    /// The star with every vertex attached to the root.
    pub fn star(n: usize) -> Self {
        Self {
            parent: vec![0; n + 1],
        }
    }

    /// Number of edges `n`.
    pub fn n_edges(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn n_vertices(&self) -> usize {
        self.parent.len()
    }

    /// Parent of `v`, `None` for the root.
    pub fn parent(&self, v: usize) -> Option<usize> {
        if v == 0 {
            None
        } else {
            Some(self.parent[v])
        }
    }

    /// The raw parent array including the root slot.
    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn into_parents(self) -> Vec<usize> {
        self.parent
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v > self.n_edges() {
            Err(Error::VertexOutOfRange {
                vertex: v,
                max: self.n_edges(),
            })
        } else {
            Ok(())
        }
    }

    /// Child adjacency in compressed form, children listed in increasing order.
    pub fn children(&self) -> Children {
        Children::new(&self.parent)
    }

    /// `|T^k|` for every vertex `k`, i.e. the size of the subtree stemming
    /// from `k`, including `k`.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1usize; self.parent.len()];
        for i in (1..self.parent.len()).rev() {
            size[self.parent[i]] += size[i];
        }
        size
    }

    pub fn subtree_size(&self, k: usize) -> Result<usize> {
        self.check_vertex(k)?;
        Ok(self.subtree_sizes()[k])
    }

    /// Depth of every vertex; the root has depth 0.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.parent.len()];
        for i in 1..self.parent.len() {
            depth[i] = depth[self.parent[i]] + 1;
        }
        depth
    }

    pub fn depth(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        let mut d = 0;
        let mut u = v;
        while u != 0 {
            u = self.parent[u];
            d += 1;
        }
        Ok(d)
    }

    pub fn root_degree(&self) -> usize {
        self.parent[1..].iter().filter(|&&p| p == 0).count()
    }

    /// The increasing tree induced on `vertices` after canonical relabeling.
    /// Every member other than the smallest must have its parent inside the
    /// set.
    pub fn induced(&self, vertices: &VertexSet) -> Result<IncreasingTree> {
        for &v in vertices.members() {
            self.check_vertex(v)?;
        }
        let edges: Vec<(usize, usize)> = vertices.members()[1..]
            .iter()
            .map(|&v| (v, self.parent[v]))
            .collect();
        canonical_relabel(vertices, &edges)
    }
}

/// Child lists of a parent array in compressed sparse row form.
#[derive(Clone, Debug)]
pub struct Children {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Children {
    pub fn new(parent: &[usize]) -> Self {
        let n1 = parent.len();
        let mut offsets = vec![0usize; n1 + 1];
        for &p in &parent[1..] {
            offsets[p + 1] += 1;
        }
        for v in 0..n1 {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; n1.saturating_sub(1)];
        for (i, &p) in parent.iter().enumerate().skip(1) {
            targets[fill[p]] = i;
            fill[p] += 1;
        }
        Self { offsets, targets }
    }

    pub fn of(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// A sorted, duplicate-free, nonempty set of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { members })
    }

    pub fn single(v: usize) -> Self {
        Self { members: vec![v] }
    }

    /// `{lo, lo + 1, ..., hi}`.
    pub fn range(lo: usize, hi: usize) -> Result<Self> {
        Self::new((lo..=hi).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> usize {
        self.members[0]
    }

    pub fn max(&self) -> usize {
        self.members[self.members.len() - 1]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Position of `v` in the sorted member list.
    pub fn rank(&self, v: usize) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }
}

/// Uniform random increasing tree on `{0, ..., n}`: the parent of `i` is
/// uniform on `{0, ..., i - 1}`, independently over `i`.
pub fn sample_rrt<R: Rng + ?Sized>(n: usize, rng: &mut R) -> IncreasingTree {
    let mut parent = Vec::with_capacity(n + 1);
    parent.push(0);
    for i in 1..=n {
        parent.push(rng.random_range(0..i));
    }
    IncreasingTree { parent }
}

/// All `n!` increasing trees on `{0, ..., n}` in lexicographic order of
/// their parent arrays.
pub fn enumerate_increasing_trees(n: usize) -> Result<Vec<IncreasingTree>> {
    if n > ENUMERATION_CAP {
        return Err(Error::SizeCap {
            what: "tree enumeration",
            requested: n,
            cap: ENUMERATION_CAP,
        });
    }
    let count: usize = (1..=n).product();
    let mut out = Vec::with_capacity(count);
    let mut parent = vec![0usize; n + 1];
    loop {
        out.push(IncreasingTree {
            parent: parent.clone(),
        });
        // Odometer with digit i ranging over 0..i, last digit fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            if parent[i] + 1 < i {
                parent[i] += 1;
                break;
            }
            parent[i] = 0;
            i -= 1;
        }
    }
}

/// Order-preserving relabeling of a tree fragment onto `{0, ..., m}`.
///
/// `edges` lists `(child, parent)` pairs; every member except the smallest
/// must appear exactly once as a child, with its parent in the set and
/// smaller than itself.
pub fn canonical_relabel(vertices: &VertexSet, edges: &[(usize, usize)]) -> Result<IncreasingTree> {
    let m = vertices.len();
    if edges.len() != m - 1 {
        return Err(Error::NotATree(format!(
            "{} edges for {m} vertices",
            edges.len()
        )));
    }
    let mut parent = vec![usize::MAX; m];
    parent[0] = 0;
    for &(child, par) in edges {
        let c = vertices
            .rank(child)
            .ok_or_else(|| Error::NotATree(format!("vertex {child} not in the fragment")))?;
        let p = vertices
            .rank(par)
            .ok_or_else(|| Error::NotATree(format!("parent {par} of {child} not in the fragment")))?;
        if c == 0 {
            return Err(Error::NotATree(format!("root {child} has a parent")));
        }
        if p >= c {
            return Err(Error::NotATree(format!(
                "edge {par} -> {child} breaks the increasing order"
            )));
        }
        if parent[c] != usize::MAX {
            return Err(Error::NotATree(format!("vertex {child} has two parents")));
        }
        parent[c] = p;
    }
    Ok(IncreasingTree { parent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{tags, trial_rng};
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::HashMap;

    #[test]
    fn enumeration_counts_are_factorials() {
        assert_eq!(enumerate_increasing_trees(0).unwrap().len(), 1);
        assert_eq!(enumerate_increasing_trees(1).unwrap().len(), 1);
        assert_eq!(enumerate_increasing_trees(3).unwrap().len(), 6);
        assert_eq!(enumerate_increasing_trees(6).unwrap().len(), 720);
        assert_eq!(enumerate_increasing_trees(8).unwrap().len(), 40320);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let trees = enumerate_increasing_trees(5).unwrap();
        assert!(trees.windows(2).all(|w| w[0] < w[1]));
        assert!(trees
            .iter()
            .all(|t| IncreasingTree::from_parents(t.parents().to_vec()).is_ok()));
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_increasing_trees(9),
            Err(Error::SizeCap { requested: 9, .. })
        ));
    }

    #[test]
    fn from_parents_rejects_non_increasing() {
        assert!(IncreasingTree::from_parents(vec![0, 0, 2]).is_err());
        assert!(IncreasingTree::from_parents(vec![1, 0]).is_err());
        assert!(IncreasingTree::from_parents(vec![]).is_err());
        assert!(IncreasingTree::from_parents(vec![0, 0, 1]).is_ok());
    }

    #[test]
    fn relabel_examples() {
        let t = canonical_relabel(&VertexSet::single(5), &[]).unwrap();
        assert_eq!(t.n_edges(), 0);
        let t = canonical_relabel(&VertexSet::new(vec![3, 7]).unwrap(), &[(7, 3)]).unwrap();
        assert_eq!(t.parents(), &[0, 0]);
        let t = canonical_relabel(&VertexSet::new(vec![2, 4, 9]).unwrap(), &[(4, 2), (9, 2)])
            .unwrap();
        assert_eq!(t.parents(), &[0, 0, 0]);
        let t = canonical_relabel(&VertexSet::new(vec![2, 4, 9]).unwrap(), &[(4, 2), (9, 4)])
            .unwrap();
        assert_eq!(t.parents(), &[0, 0, 1]);
    }

    #[test]
    fn relabel_rejects_broken_fragments() {
        let set = VertexSet::new(vec![2, 4, 9]).unwrap();
        assert!(canonical_relabel(&set, &[(4, 2)]).is_err());
        assert!(canonical_relabel(&set, &[(4, 2), (9, 3)]).is_err());
        assert!(canonical_relabel(&set, &[(4, 9), (9, 2)]).is_err());
        assert!(canonical_relabel(&set, &[(4, 2), (4, 2)]).is_err());
        assert!(canonical_relabel(&set, &[(2, 4), (9, 2)]).is_err());
    }

    #[test]
    fn primitive_queries() {
        let path = IncreasingTree::path(2);
        assert_eq!(path.depth(2).unwrap(), 2);
        assert_eq!(path.depth(0).unwrap(), 0);
        assert_eq!(path.root_degree(), 1);
        assert!(path.depth(3).is_err());
        let star = IncreasingTree::star(7);
        assert_eq!(star.root_degree(), 7);
        assert_eq!(star.subtree_size(0).unwrap(), 8);
        assert_eq!(star.subtree_size(7).unwrap(), 1);
        assert!(star.subtree_size(8).is_err());
        assert_eq!(IncreasingTree::path(1).root_degree(), 1);
    }

    #[test]
    fn children_lists_match_parents() {
        let mut rng = trial_rng(1, 0, tags::TREE);
        let t = sample_rrt(200, &mut rng);
        let ch = t.children();
        let mut seen = 0;
        for v in 0..=200 {
            for &c in ch.of(v) {
                assert_eq!(t.parent(c), Some(v));
                seen += 1;
            }
            assert!(ch.of(v).windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(seen, 200);
    }

    #[test]
    fn two_edge_trees_equally_likely() {
        let mut rng = trial_rng(2, 0, tags::TREE);
        let trials = 200_000;
        let path = (0..trials)
            .filter(|_| sample_rrt(2, &mut rng).parents()[2] == 1)
            .count();
        let se = (0.25f64 / trials as f64).sqrt();
        assert!((path as f64 / trials as f64 - 0.5).abs() < 4.0 * se);
    }

    #[test]
    fn root_degree_law_is_bernoulli_sum() {
        // P(deg = d) from the product of Bernoulli(1/i), versus enumeration.
        for n in 1..=6usize {
            let mut law = vec![1.0f64];
            for i in 1..=n {
                let q = 1.0 / i as f64;
                let mut next = vec![0.0; law.len() + 1];
                for (d, &p) in law.iter().enumerate() {
                    next[d] += p * (1.0 - q);
                    next[d + 1] += p * q;
                }
                law = next;
            }
            let trees = enumerate_increasing_trees(n).unwrap();
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for t in &trees {
                *counts.entry(t.root_degree()).or_default() += 1;
            }
            for (d, &p) in law.iter().enumerate() {
                let exact = *counts.get(&d).unwrap_or(&0) as f64 / trees.len() as f64;
                assert!((exact - p).abs() < 1e-12, "n={n} d={d}");
            }
        }
    }

    proptest! {
        #[test]
        fn sampled_trees_are_increasing(n in 0usize..300, seed in any::<u64>()) {
            let mut rng = trial_rng(seed, 0, tags::TREE);
            let t = sample_rrt(n, &mut rng);
            prop_assert_eq!(t.n_edges(), n);
            prop_assert!(IncreasingTree::from_parents(t.parents().to_vec()).is_ok());
            let sizes = t.subtree_sizes();
            let ch = t.children();
            let hanging: usize = ch.of(0).iter().map(|&c| sizes[c]).sum();
            prop_assert_eq!(hanging + 1, n + 1);
            let depths = t.depths();
            for v in [0, n / 2, n] {
                prop_assert_eq!(depths[v], t.depth(v).unwrap());
            }
        }

        #[test]
        fn induced_subtree_is_relabeled_subtree(n in 1usize..60, seed in any::<u64>()) {
            let mut rng = trial_rng(seed, 1, tags::TREE);
            let t = sample_rrt(n, &mut rng);
            let k = rng.random_range(0..=n);
            let ch = t.children();
            let mut stack = vec![k];
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                stack.extend_from_slice(ch.of(v));
            }
            let set = VertexSet::new(members).unwrap();
            let sub = t.induced(&set).unwrap();
            prop_assert_eq!(sub.n_vertices(), t.subtree_size(k).unwrap());
        }
    }
}
