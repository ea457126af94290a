//! Samplers that draw cut statistics directly from the splitting property,
//! without building the tree.
//!
//! Removing a uniform edge of a uniform recursive tree with `m` edges detaches
//! a subtree of size `j` with probability `(m+1) / (m j (j+1))`, and given the
//! two vertex sets both parts are independent uniform recursive trees after
//! canonical relabeling. The detached vertex set `S` itself has probability
//! proportional to `min S`. Each sampler below follows one component at a time
//! through these facts, so a statistic that needs `O(n / ln n)` cuts costs
//! `O(n / ln n)` time and no memory proportional to `n`.

use rand::Rng;

use crate::error::{invalid, Result};

/// `D_m`: size of the subtree detached by a uniform cut of a tree with `m`
/// edges, i.e. `xi` conditioned on `xi <= m`.
pub fn sample_split_size<R: Rng + ?Sized>(m: usize, rng: &mut R) -> usize {
    debug_assert!(m >= 1);
    // floor(1/V) <= m iff V > 1/(m+1), so draw V uniformly on (1/(m+1), 1].
    let lo = 1.0 / (m as f64 + 1.0);
    let u = 1.0 - rng.random::<f64>();
    let w = lo + u * (1.0 - lo);
    ((1.0 / w) as usize).clamp(1, m)
}

/// Moves each of `t` marked items, placed uniformly without replacement among
/// `total` slots, into a uniform `draws`-subset with the right probability.
/// Returns how many land in the subset.
fn hypergeometric<R: Rng + ?Sized>(t: usize, draws: usize, total: usize, rng: &mut R) -> usize {
    let (mut d, mut tot, mut hit) = (draws, total, 0);
    for _ in 0..t {
        if d > 0 && rng.random_range(0..tot) < d {
            hit += 1;
            d -= 1;
        }
        tot -= 1;
    }
    hit
}

/// Severed sizes of the root isolation of a tree with `n` edges, in order.
pub fn root_isolation_sizes<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut m = n;
    let mut sizes = Vec::new();
    while m > 0 {
        let j = sample_split_size(m, rng);
        sizes.push(j);
        m -= j;
    }
    sizes
}

/// `X_n`.
pub fn root_isolation_count<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    let mut m = n;
    let mut cuts = 0;
    while m > 0 {
        m -= sample_split_size(m, rng);
        cuts += 1;
    }
    cuts
}

/// `(Y_{n,1}, ..., Y_{n,l})` for i.i.d. uniform targets `U_1, ..., U_l`.
pub fn random_targets_counts<R: Rng + ?Sized>(n: usize, ell: usize, rng: &mut R) -> Result<Vec<usize>> {
    if ell == 0 {
        return Err(invalid("need at least one target"));
    }
    // Distinct target vertices, each tagged with the first index drawing it.
    let draws: Vec<usize> = (0..ell).map(|_| rng.random_range(0..=n)).collect();
    let mut first: Vec<usize> = Vec::new();
    for (i, v) in draws.iter().enumerate() {
        if !draws[..i].contains(v) {
            first.push(i);
        }
    }
    let mut per_label = vec![0usize; ell];
    let mut stack = vec![(n, first)];
    while let Some((m, labels)) = stack.pop() {
        if m == 0 || labels.is_empty() {
            continue;
        }
        per_label[*labels.iter().min().expect("nonempty")] += 1;
        let j = sample_split_size(m, rng);
        let (mut rem_sev, mut rem_all) = (j, m + 1);
        let (mut sev, mut kept) = (Vec::new(), Vec::new());
        for &l in &labels {
            if rng.random_range(0..rem_all) < rem_sev {
                sev.push(l);
                rem_sev -= 1;
            } else {
                kept.push(l);
            }
            rem_all -= 1;
        }
        stack.push((j - 1, sev));
        stack.push((m - j, kept));
    }
    Ok(per_label
        .iter()
        .scan(0, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect())
}

/// `Z_{n,1}`: cuts needed to isolate the last vertex `n`.
///
/// The largest label of a component lies in the detached set `S` of size
/// `j` with probability `(j+1)/(m+1)`, since `P(S)` is proportional to
/// `min S`.
pub fn last_vertex_count<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    let mut m = n;
    let mut cuts = 0;
    while m > 0 {
        let j = sample_split_size(m, rng);
        cuts += 1;
        if rng.random_range(0..=m) <= j {
            m = j - 1;
        } else {
            m -= j;
        }
    }
    cuts
}

/// `(A_{n,2}, ..., A_{n,l})` for `l` distinct uniform targets.
pub fn disconnection_counts<R: Rng + ?Sized>(n: usize, ell: usize, rng: &mut R) -> Result<Vec<usize>> {
    if ell < 2 || ell > n + 1 {
        return Err(invalid(format!("need 2 <= l <= n + 1 targets, got {ell}")));
    }
    // Retained components as (edges, targets), each holding at least two.
    let mut comps = vec![(n, ell)];
    let mut steps = 0;
    let mut counts = Vec::with_capacity(ell - 1);
    while counts.len() < ell - 1 {
        let total: usize = comps.iter().map(|c| c.0).sum();
        let mut r = rng.random_range(0..total);
        let mut idx = 0;
        while r >= comps[idx].0 {
            r -= comps[idx].0;
            idx += 1;
        }
        let (m, t) = comps.swap_remove(idx);
        let j = sample_split_size(m, rng);
        let h = hypergeometric(t, j, m + 1, rng);
        steps += 1;
        if h > 0 && h < t {
            counts.push(steps);
        }
        if h >= 2 {
            comps.push((j - 1, h));
        }
        if t - h >= 2 {
            comps.push((m - j, t - h));
        }
    }
    Ok(counts)
}

/// `X_{n,l}`: cuts needed to isolate `0, 1, ..., l - 1`.
///
/// Targets are always the smallest labels of their component. With `k` of
/// them among `m + 1` vertices, the number landing in the detached set is
/// `max(H - 1, 0)` for `H` hypergeometric with `j + 1` draws: summing
/// `min S` over the sets `S` with `h` targets gives `C(k, h+1) C(m+1-k, j-h)`.
pub fn first_targets_count<R: Rng + ?Sized>(n: usize, ell: usize, rng: &mut R) -> Result<usize> {
    if ell == 0 || ell > n + 1 {
        return Err(invalid(format!("ell = {ell} outside 1..={}", n + 1)));
    }
    let mut stack = vec![(n, ell)];
    let mut cuts = 0;
    while let Some((m, k)) = stack.pop() {
        if m == 0 || k == 0 {
            continue;
        }
        let j = sample_split_size(m, rng);
        let h = hypergeometric(k, j + 1, m + 1, rng).saturating_sub(1);
        cuts += 1;
        stack.push((j - 1, h));
        stack.push((m - j, k - h));
    }
    Ok(cuts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::destruction::{disconnect_targets, isolate_first_ell, isolate_root_fast, isolate_targets, sample_destruction};
    use crate::rng::{tags, trial_rng};
    use crate::tree::{sample_rrt, VertexSet};

    fn binom(n: usize, k: usize) -> f64 {
        if k > n {
            return 0.0;
        }
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn split_size_law() {
        let mut rng = trial_rng(1, 0, tags::SPLITTING);
        let m = 5;
        let trials = 400_000;
        let mut freq = [0usize; 6];
        for _ in 0..trials {
            freq[sample_split_size(m, &mut rng)] += 1;
        }
        for (j, &f) in freq.iter().enumerate().skip(1) {
            let p = (m + 1) as f64 / (m * j * (j + 1)) as f64;
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((f as f64 / trials as f64 - p).abs() < 4.0 * se, "j={j}");
        }
        assert_eq!(sample_split_size(1, &mut rng), 1);
    }

    #[test]
    fn target_split_formula_matches_min_weighted_subsets() {
        // Enumerate S in {1..m} with weight min S, count targets {0..k-1} in S.
        for m in 1..=7usize {
            for k in 1..=m + 1 {
                for j in 1..=m {
                    let mut weight = vec![0.0; k + 1];
                    for mask in 0u32..(1 << m) {
                        if mask.count_ones() as usize != j {
                            continue;
                        }
                        let min = mask.trailing_zeros() as usize + 1;
                        let h = (1..k).filter(|&v| mask >> (v - 1) & 1 == 1).count();
                        weight[h] += min as f64;
                    }
                    let total = binom(m + 1, j + 1);
                    for (h, &w) in weight.iter().enumerate().take(k.min(j) + 1).skip(1) {
                        let formula = binom(k, h + 1) * binom(m + 1 - k, j - h) / total;
                        let exact = w / total;
                        assert!((formula - exact).abs() < 1e-12, "m={m} k={k} j={j} h={h}");
                    }
                }
            }
        }
    }

    fn mean_pair(trials: u64, mut a: impl FnMut(u64) -> f64, mut b: impl FnMut(u64) -> f64) -> (f64, f64, f64) {
        let xs: Vec<f64> = (0..trials).map(&mut a).collect();
        let ys: Vec<f64> = (0..trials).map(&mut b).collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let var = |v: &[f64], m: f64| v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        let (mx, my) = (mean(&xs), mean(&ys));
        let se = ((var(&xs, mx) + var(&ys, my)) / trials as f64).sqrt();
        (mx, my, se)
    }

    fn trace(n: usize, seed: u64) -> crate::destruction::DestructionTrace {
        let mut rng = trial_rng(seed, 0, tags::DESTRUCTION);
        sample_destruction(sample_rrt(n, &mut rng), &mut rng).unwrap()
    }

    #[test]
    fn samplers_agree_with_tree_simulation_in_mean() {
        let n = 300;
        let trials = 6000;
        let (a, b, se) = mean_pair(
            trials,
            |k| root_isolation_count(n, &mut trial_rng(k, 0, tags::SPLITTING)) as f64,
            |k| isolate_root_fast(&trace(n, k)).unwrap() as f64,
        );
        assert!((a - b).abs() < 4.5 * se, "X: {a} {b}");

        let (a, b, se) = mean_pair(
            trials,
            |k| last_vertex_count(n, &mut trial_rng(k, 1, tags::SPLITTING)) as f64,
            |k| isolate_targets(&trace(n, k), &VertexSet::single(n)).unwrap() as f64,
        );
        assert!((a - b).abs() < 4.5 * se, "Z: {a} {b}");

        let (a, b, se) = mean_pair(
            trials,
            |k| first_targets_count(n, 3, &mut trial_rng(k, 2, tags::SPLITTING)).unwrap() as f64,
            |k| isolate_first_ell(&trace(n, k), 3).unwrap().total_cuts as f64,
        );
        assert!((a - b).abs() < 4.5 * se, "X_3: {a} {b}");

        let (a, b, se) = mean_pair(
            trials,
            |k| random_targets_counts(n, 3, &mut trial_rng(k, 3, tags::SPLITTING)).unwrap()[2] as f64,
            |k| {
                let mut rng = trial_rng(k, 4, tags::TARGETS);
                let v: Vec<usize> = (0..3).map(|_| rng.random_range(0..=n)).collect();
                isolate_targets(&trace(n, k), &VertexSet::new(v).unwrap()).unwrap() as f64
            },
        );
        assert!((a - b).abs() < 4.5 * se, "Y_3: {a} {b}");

        for k_idx in [0usize, 1] {
            let (a, b, se) = mean_pair(
                trials,
                |k| disconnection_counts(n, 3, &mut trial_rng(k, 5, tags::SPLITTING)).unwrap()[k_idx] as f64,
                |k| {
                    let mut rng = trial_rng(k, 6, tags::TARGETS);
                    let mut v = Vec::new();
                    while v.len() < 3 {
                        let x = rng.random_range(0..=n);
                        if !v.contains(&x) {
                            v.push(x);
                        }
                    }
                    disconnect_targets(&trace(n, k), &VertexSet::new(v).unwrap()).unwrap().counts[k_idx] as f64
                },
            );
            assert!((a - b).abs() < 4.5 * se, "A_{}: {a} {b}", k_idx + 2);
        }
    }

    #[test]
    fn structural_properties() {
        for k in 0..200 {
            let mut rng = trial_rng(k, 9, tags::SPLITTING);
            let sizes = root_isolation_sizes(50, &mut rng);
            assert_eq!(sizes.iter().sum::<usize>(), 50);
            let y = random_targets_counts(50, 4, &mut rng).unwrap();
            assert!(y.windows(2).all(|w| w[0] <= w[1]));
            let a = disconnection_counts(50, 4, &mut rng).unwrap();
            assert_eq!(a.len(), 3);
            assert!(a.windows(2).all(|w| w[0] < w[1]));
            assert!(first_targets_count(50, 1, &mut rng).unwrap() >= 1);
        }
        let mut rng = trial_rng(0, 0, tags::SPLITTING);
        assert_eq!(first_targets_count(4, 5, &mut rng).unwrap(), 4);
        assert!(disconnection_counts(4, 1, &mut rng).is_err());
        assert!(random_targets_counts(4, 0, &mut rng).is_err());
        assert_eq!(root_isolation_count(0, &mut rng), 0);
        assert_eq!(last_vertex_count(1, &mut rng), 1);
    }
}
