//! Union-find used to replay edge removals backwards as unions.

#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
    min: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "too many elements for u32 indices");
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            min: (0..n as u32).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        // Path halving.
        while self.parent[x] as usize != x {
            let gp = self.parent[self.parent[x] as usize];
            self.parent[x] = gp;
            x = gp as usize;
        }
        x
    }

    /// Merges the sets of `a` and `b`, returning the new representative.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.min[ra] = self.min[ra].min(self.min[rb]);
        ra
    }

    /// Size of the set whose representative is `root`.
    pub fn size_of_root(&self, root: usize) -> usize {
        self.size[root] as usize
    }

    /// Smallest element of the set whose representative is `root`.
    pub fn min_of_root(&self, root: usize) -> usize {
        self.min[root] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unions_track_size_and_min() {
        let mut d = DisjointSets::new(6);
        d.union(4, 5);
        d.union(2, 5);
        let r = d.find(4);
        assert_eq!(d.size_of_root(r), 3);
        assert_eq!(d.min_of_root(r), 2);
        assert_ne!(d.find(0), r);
        let r2 = d.union(0, 4);
        assert_eq!(d.min_of_root(r2), 0);
        assert_eq!(d.size_of_root(r2), 4);
        assert_eq!(d.union(2, 0), r2);
    }
}
