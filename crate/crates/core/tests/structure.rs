//! Per-instance identities between the destruction, cut-tree and
//! component-tree views of the same trace.

use rand::Rng;
use rrtcut::component_tree::build_component_tree;
use rrtcut::cut_tree::{
    build_cut_tree, build_ordered_cut_tree, ordered_leaf_depths, reduced_length, trunk_decomposition,
};
use rrtcut::destruction::{
    isolate_root, isolate_root_fast, isolate_targets, ordered_root_isolation_count, sample_destruction,
};
use rrtcut::rng::{run_trials, tags, trial_rng};
use rrtcut::tree::{enumerate_increasing_trees, sample_rrt, IncreasingTree, VertexSet};
use rrtcut::DestructionTrace;

fn all_orders(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let e = rest.remove(i);
            cur.push(e);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, e);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=n).collect(), &mut Vec::new(), &mut out);
    out
}

#[test]
fn reduced_length_identity_on_every_small_trace() {
    for n in 1..=5 {
        let sets: Vec<VertexSet> = (1u32..1 << (n + 1))
            .map(|mask| VertexSet::new((0..=n).filter(|v| mask >> v & 1 == 1).collect()).unwrap())
            .collect();
        for tree in enumerate_increasing_trees(n).unwrap() {
            for order in all_orders(n) {
                let trace = DestructionTrace::from_order(tree.clone(), order).unwrap();
                let ct = build_cut_tree(&trace);
                for s in &sets {
                    let cuts = isolate_targets(&trace, s).unwrap();
                    assert_eq!(reduced_length(&ct, s).unwrap(), cuts + s.len() - 1);
                }
                let depth_sum: usize = (0..=n).map(|v| ct.depth(ct.leaf(v))).sum();
                let single_sum: usize = (0..=n).map(|v| isolate_targets(&trace, &VertexSet::single(v)).unwrap()).sum();
                assert_eq!(depth_sum, single_sum);
            }
        }
    }
}

#[test]
fn two_leaves_under_the_first_split() {
    // Path 0-1-2-3 cut first at edge 2: leaves 2 and 3 share the right block.
    let trace = DestructionTrace::from_order(IncreasingTree::path(3), vec![2, 3, 1]).unwrap();
    let ct = build_cut_tree(&trace);
    let targets = VertexSet::new(vec![2, 3]).unwrap();
    assert_eq!(isolate_targets(&trace, &targets).unwrap(), 2);
    assert_eq!(reduced_length(&ct, &targets).unwrap(), 3);
}

#[test]
fn trunk_matches_root_isolation() {
    let trace = DestructionTrace::natural(IncreasingTree::path(1));
    let td = trunk_decomposition(&build_cut_tree(&trace));
    assert_eq!(td.trunk.len(), 2);
    assert_eq!(td.branch_depths, vec![0]);
    for seed in 0..200 {
        let mut rng = trial_rng(seed, 0, tags::DESTRUCTION);
        let n = rng.random_range(1..400);
        let trace = sample_destruction(sample_rrt(n, &mut rng), &mut rng).unwrap();
        let ct = build_cut_tree(&trace);
        let td = trunk_decomposition(&ct);
        let iso = isolate_root(&trace);
        assert_eq!(td.trunk_length(), iso.cuts);
        let sizes: Vec<usize> = td.trunk.iter().map(|&v| ct.node(v).size).collect();
        assert!(sizes.windows(2).all(|w| w[0] > w[1]));
        // Branch sizes are the severed sizes.
        let branch_sizes: Vec<usize> = sizes.windows(2).map(|w| w[0] - w[1]).collect();
        assert_eq!(branch_sizes, iso.severed_sizes);
        assert_eq!(td.branch_depths.len(), iso.cuts);
    }
}

#[test]
fn ordered_destruction_identities() {
    for seed in 0..300 {
        let mut rng = trial_rng(seed, 0, tags::TREE);
        let n = rng.random_range(1..500);
        let tree = sample_rrt(n, &mut rng);
        let ct = build_ordered_cut_tree(&tree);
        assert_eq!(ct.depth(ct.leaf(0)), tree.root_degree());
        assert_eq!(ordered_root_isolation_count(&tree), tree.root_degree());
        assert_eq!(ordered_leaf_depths(&tree), ct.leaf_depths());
        let natural = DestructionTrace::natural(tree.clone());
        assert_eq!(build_cut_tree(&natural), ct);
        assert_eq!(build_component_tree(&natural).parents(), tree.parents());
    }
    let n1 = DestructionTrace::natural(IncreasingTree::path(1));
    assert_eq!(build_ordered_cut_tree(n1.tree()), build_cut_tree(&n1));
}

#[test]
fn component_tree_cross_checks() {
    for seed in 0..200 {
        let mut rng = trial_rng(seed, 1, tags::DESTRUCTION);
        let n = rng.random_range(1..300);
        let trace = sample_destruction(sample_rrt(n, &mut rng), &mut rng).unwrap();
        let ct = build_component_tree(&trace);
        let iso = isolate_root(&trace);
        assert_eq!(ct.child_sizes(0), iso.severed_sizes);
        for v in 0..ct.n_individuals() {
            let below: usize = ct.children(v).iter().map(|&c| ct.size(c)).sum();
            assert_eq!(ct.size(v), below + 1);
        }
    }
    let one = build_component_tree(&DestructionTrace::natural(IncreasingTree::path(1)));
    assert_eq!((one.size(0), one.child_sizes(0)), (2, vec![1]));
}

#[test]
fn fast_path_equals_replay() {
    let mismatches: usize = run_trials(1, tags::DESTRUCTION, 20_000, |_, rng| {
        let trace = sample_destruction(sample_rrt(50, rng), rng).unwrap();
        usize::from(isolate_root_fast(&trace).unwrap() != isolate_root(&trace).cuts)
    })
    .into_iter()
    .sum();
    assert_eq!(mismatches, 0);
}

#[test]
fn removal_orders_are_uniform() {
    let tree = IncreasingTree::star(3);
    let orders = all_orders(3);
    let draws = run_trials(2, tags::DESTRUCTION, 300_000, |_, rng| {
        let t = sample_destruction(tree.clone(), rng).unwrap();
        orders.iter().position(|o| o.as_slice() == t.order()).unwrap()
    });
    let mut counts = vec![0u64; 6];
    for d in draws {
        counts[d] += 1;
    }
    let (_, p) = rrtcut::stats::chi_square(&counts, &[1.0 / 6.0; 6]).unwrap();
    assert!(p > 1e-3, "p = {p}");
    let t = DestructionTrace::from_times(IncreasingTree::star(3), &[0.9, 0.2, 0.5]).unwrap();
    assert_eq!(t.order(), &[2, 3, 1]);
    let one = sample_destruction(IncreasingTree::path(1), &mut trial_rng(0, 0, 0)).unwrap();
    assert_eq!(one.order(), &[1]);
}
