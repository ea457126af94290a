use rand::Rng;

use crate::tree::IncreasingTree;

/// Root isolation where each step picks a uniform vertex of the root
/// component and removes it together with everything below it. The step that
/// picks the root is counted.
pub fn isolate_root_by_vertex_removal<R: Rng + ?Sized>(tree: &IncreasingTree, rng: &mut R) -> usize {
    let children = tree.children();
    let n1 = tree.n_vertices();
    let mut alive: Vec<usize> = (0..n1).collect();
    let mut pos: Vec<usize> = (0..n1).collect();
    let mut gone = vec![false; n1];
    let mut stack = Vec::new();
    let mut steps = 0;
    loop {
        steps += 1;
        let v = alive[rng.random_range(0..alive.len())];
        if v == 0 {
            return steps;
        }
        stack.push(v);
        while let Some(u) = stack.pop() {
            gone[u] = true;
            let i = pos[u];
            let last = *alive.last().expect("root is alive");
            alive.swap_remove(i);
            if last != u {
                pos[last] = i;
            }
            stack.extend(children.of(u).iter().copied().filter(|&c| !gone[c]));
        }
    }
}

/// Cuts of the ordered destruction (edge `i` removed at step `i`) that fall
/// in the root component. Every root edge is hit while still attached, and
/// every other edge has already left with its root-edge ancestor, so this is
/// the root degree.
pub fn ordered_root_isolation_count(tree: &IncreasingTree) -> usize {
    tree.root_degree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::destruction::{isolate_root, DestructionTrace};
    use crate::rng::{tags, trial_rng};
    use crate::tree::sample_rrt;

    #[test]
    fn small_cases() {
        let mut rng = trial_rng(0, 0, tags::VERTEX_REMOVAL);
        assert_eq!(isolate_root_by_vertex_removal(&IncreasingTree::singleton(), &mut rng), 1);
        let trials = 200_000;
        let ones = (0..trials)
            .filter(|_| isolate_root_by_vertex_removal(&IncreasingTree::path(1), &mut rng) == 1)
            .count();
        let se = (0.25 / trials as f64).sqrt();
        assert!((ones as f64 / trials as f64 - 0.5).abs() < 4.0 * se);
    }

    #[test]
    fn ordered_count_is_natural_replay() {
        assert_eq!(ordered_root_isolation_count(&IncreasingTree::star(7)), 7);
        assert_eq!(ordered_root_isolation_count(&IncreasingTree::path(7)), 1);
        for k in 0..50 {
            let mut rng = trial_rng(k, 0, tags::TREE);
            let tree = sample_rrt(60, &mut rng);
            let replay = isolate_root(&DestructionTrace::natural(tree.clone())).cuts;
            assert_eq!(ordered_root_isolation_count(&tree), replay);
        }
    }
}
