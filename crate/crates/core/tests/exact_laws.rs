//! Monte Carlo laws of every sampler against exact laws at small sizes.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rrtcut::coupling::coupled_isolation;
use rrtcut::cut_tree::{build_cut_tree, build_ordered_cut_tree};
use rrtcut::destruction::{self, direct, gm_coalescent, isolate_first_ell, isolate_root, sample_destruction};
use rrtcut::oracle::{
    self, check_counts_generic, exact_isolation_law, exact_split_law, exhaustive_destruction, ratio, Outcome,
    Statistic,
};
use rrtcut::percolation::{percolate, polya_hoppe_urn, yule_with_mutations};
use rrtcut::rng::{run_trials, tags, TrialRng};
use rrtcut::splitting;
use rrtcut::tree::{enumerate_increasing_trees, sample_rrt, IncreasingTree, VertexSet};
use rrtcut::{DestructionTrace, ExactDistribution};

const TRIALS: usize = 100_000;
const Z: f64 = 4.0;

fn tally<K: Ord>(values: Vec<K>) -> BTreeMap<K, u64> {
    let mut m = BTreeMap::new();
    for v in values {
        *m.entry(v).or_default() += 1;
    }
    m
}

fn exact(n: usize, s: &str) -> ExactDistribution<Outcome> {
    exhaustive_destruction(n, &s.parse::<Statistic>().unwrap()).unwrap()
}

fn exact_counts(n: usize, s: &str) -> ExactDistribution {
    exact(n, s).into_counts().unwrap()
}

fn random_trace(n: usize, rng: &mut TrialRng) -> DestructionTrace {
    sample_destruction(sample_rrt(n, rng), rng).unwrap()
}

fn distinct_targets(n: usize, ell: usize, rng: &mut TrialRng) -> VertexSet {
    let mut pool: Vec<usize> = (0..=n).collect();
    for i in 0..ell {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    VertexSet::new(pool[..ell].to_vec()).unwrap()
}

fn assert_matches(law: &ExactDistribution, f: impl Fn(&mut TrialRng) -> usize + Sync, seed: u64, what: &str) {
    let counts = tally(run_trials(seed, tags::DESTRUCTION, TRIALS, |_, rng| f(rng)));
    if let Err(e) = law.check_counts(&counts, Z) {
        panic!("{what}: {e}");
    }
}

#[test]
fn root_isolation_samplers() {
    for n in 1..=6 {
        let law = exact_isolation_law(n).unwrap();
        assert_matches(&law, |rng| isolate_root(&random_trace(n, rng)).cuts, 1, "replay");
        assert_matches(
            &law,
            |rng| destruction::isolate_root_fast(&random_trace(n, rng)).unwrap(),
            2,
            "fast path",
        );
        assert_matches(&law, |rng| splitting::root_isolation_count(n, rng), 3, "splitting");
        assert_matches(&law, |rng| coupled_isolation(n, rng).unwrap().isolation.cuts, 4, "coupling");
        assert_matches(
            &law,
            |rng| direct::isolate_targets(&sample_rrt(n, rng), &VertexSet::single(0), rng).unwrap(),
            5,
            "direct",
        );
    }
}

#[test]
fn staged_and_joint_first_targets() {
    for n in 1..=5 {
        for ell in 2..=3.min(n + 1) {
            let law = exact_counts(n, &format!("X:{ell}"));
            assert_matches(&law, |rng| isolate_first_ell(&random_trace(n, rng), ell).unwrap().total_cuts, 6, "staged");
            assert_matches(
                &law,
                |rng| direct::isolate_first_ell(&sample_rrt(n, rng), ell, rng).unwrap().total_cuts,
                7,
                "direct staged",
            );
            assert_matches(&law, |rng| splitting::first_targets_count(n, ell, rng).unwrap(), 8, "splitting");
        }
    }
}

#[test]
fn random_and_last_targets() {
    for n in 1..=5 {
        let z = exact_counts(n, "Z:1");
        let last = VertexSet::single(n);
        assert_matches(&z, |rng| destruction::isolate_targets(&random_trace(n, rng), &last).unwrap(), 9, "Z replay");
        assert_matches(&z, |rng| splitting::last_vertex_count(n, rng), 10, "Z splitting");
        for ell in 1..=2 {
            let y = exact_counts(n, &format!("Y:{ell}"));
            assert_matches(
                &y,
                |rng| {
                    let t: Vec<usize> = (0..ell).map(|_| rng.random_range(0..=n)).collect();
                    destruction::isolate_targets(&random_trace(n, rng), &VertexSet::new(t).unwrap()).unwrap()
                },
                11,
                "Y replay",
            );
            assert_matches(
                &y,
                |rng| splitting::random_targets_counts(n, ell, rng).unwrap()[ell - 1],
                12,
                "Y splitting",
            );
        }
    }
}

#[test]
fn disconnection_counts() {
    for n in 1..=5 {
        for ell in 2..=3.min(n + 1) {
            for k in 2..=ell {
                let a = exact_counts(n, &format!("A:{k}:{ell}"));
                assert_matches(
                    &a,
                    |rng| {
                        let t = distinct_targets(n, ell, rng);
                        destruction::disconnect_targets(&random_trace(n, rng), &t).unwrap().a(k).unwrap()
                    },
                    13,
                    "A replay",
                );
                assert_matches(
                    &a,
                    |rng| {
                        let t = distinct_targets(n, ell, rng);
                        direct::disconnect_targets(&sample_rrt(n, rng), &t, rng).unwrap().a(k).unwrap()
                    },
                    14,
                    "A direct",
                );
                assert_matches(
                    &a,
                    |rng| splitting::disconnection_counts(n, ell, rng).unwrap()[k - 2],
                    15,
                    "A splitting",
                );
                let b = exact_counts(n, &format!("B:{k}:{ell}"));
                let first = VertexSet::range(0, ell - 1).unwrap();
                assert_matches(
                    &b,
                    |rng| destruction::disconnect_targets(&random_trace(n, rng), &first).unwrap().a(k).unwrap(),
                    16,
                    "B replay",
                );
            }
        }
    }
}

#[test]
fn first_cut_depths_and_collisions() {
    for n in 1..=6 {
        assert_eq!(exact_counts(n, "first-cut"), exact_split_law(n).unwrap());
        assert_matches(
            &exact_split_law(n).unwrap(),
            |rng| splitting::sample_split_size(n, rng),
            17,
            "split size",
        );
        assert_matches(
            &exact_counts(n, "collisions"),
            |rng| gm_coalescent(&sample_rrt(n, rng), rng).unwrap().collisions(),
            18,
            "collisions",
        );
    }
    for n in 1..=5 {
        let v = n / 2;
        assert_matches(
            &exact_counts(n, &format!("leaf-depth:{v}")),
            |rng| {
                let ct = build_cut_tree(&random_trace(n, rng));
                ct.depth(ct.leaf(v))
            },
            19,
            "leaf depth",
        );
    }
}

#[test]
fn shapes() {
    for n in 1..=5 {
        let law = exact(n, "component-shape");
        let sampled = run_trials(20, tags::DESTRUCTION, TRIALS, |_, rng| {
            Statistic::ComponentShape.evaluate(&random_trace(n, rng), None).unwrap()
        });
        check_counts_generic(&law, &tally(sampled), Z).unwrap();

        let bst = oracle::bst_shape_law(n).unwrap();
        let sampled = run_trials(21, tags::TREE, TRIALS, |_, rng| build_ordered_cut_tree(&sample_rrt(n, rng)).shape());
        check_counts_generic(&bst, &tally(sampled), Z).unwrap();
    }
}

#[test]
fn enumeration_counts_uniform_trees() {
    // Chi-square of sampled trees against the uniform law on all 120 trees.
    let trees = enumerate_increasing_trees(5).unwrap();
    let index: BTreeMap<Vec<usize>, usize> =
        trees.iter().enumerate().map(|(i, t)| (t.parents().to_vec(), i)).collect();
    let draws = run_trials(22, tags::TREE, 300_000, |_, rng| index[sample_rrt(5, rng).parents()]);
    let mut counts = vec![0u64; trees.len()];
    for d in draws {
        counts[d] += 1;
    }
    let probs = vec![1.0 / trees.len() as f64; trees.len()];
    let (_, p) = rrtcut::stats::chi_square(&counts, &probs).unwrap();
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn subtree_and_degree_laws() {
    assert_matches(
        &oracle::subtree_size_law(20, 1).unwrap(),
        |rng| sample_rrt(20, rng).subtree_size(1).unwrap(),
        23,
        "subtree",
    );
    assert_matches(
        &oracle::subtree_size_law(8, 3).unwrap(),
        |rng| rrtcut::percolation::sample_subtree_size(8, 3, rng).unwrap(),
        24,
        "subtree urn",
    );
    for n in 1..=6 {
        let trees = enumerate_increasing_trees(n).unwrap();
        let law = ExactDistribution::from_counts(tally(trees.iter().map(IncreasingTree::root_degree).collect()))
            .unwrap();
        assert_eq!(law, oracle::root_degree_law(n).unwrap());
    }
}

#[test]
fn root_cluster_laws() {
    let half = ratio(1, 2);
    for n in 1..=6 {
        let law = oracle::root_cluster_law(n, &half).unwrap();
        assert_eq!(law, oracle::exhaustive_percolation_law(n, &half).unwrap());
        assert_matches(&law, |rng| polya_hoppe_urn(n, 0.5, rng).unwrap().red, 25, "urn");
        assert_matches(
            &law,
            |rng| yule_with_mutations(n, 0.5, rng).unwrap().final_root_type(),
            26,
            "yule",
        );
        assert_matches(
            &law,
            |rng| percolate(&sample_rrt(n, rng), 0.5, rng).unwrap().root_cluster_size,
            27,
            "percolate",
        );
    }
    let full = oracle::root_cluster_law(4, &BigRational::one()).unwrap();
    assert_eq!(full.support(), vec![5]);
}

#[test]
fn isolation_mean_matches_recursion_at_moderate_size() {
    // E X_m = 1 + sum_j P(D_m = j) E X_{m-j}, in floating point.
    let n = 1000;
    let mut mean = vec![0.0f64; n + 1];
    for m in 1..=n {
        let mf = m as f64;
        mean[m] = 1.0
            + (1..=m)
                .map(|j| (mf + 1.0) / (mf * j as f64 * (j as f64 + 1.0)) * mean[m - j])
                .sum::<f64>();
    }
    for (seed, f) in [
        (28u64, splitting::root_isolation_count::<TrialRng> as fn(usize, &mut TrialRng) -> usize),
        (29, destruction::sample_isolation_count::<TrialRng>),
    ] {
        let v: Vec<f64> = run_trials(seed, tags::DESTRUCTION, 40_000, |_, rng| f(n, rng) as f64);
        let e = rrtcut::EmpiricalDistribution::new(v).unwrap();
        assert!((e.mean() - mean[n]).abs() < 4.0 * e.standard_error(), "{} vs {}", e.mean(), mean[n]);
    }
}
