//! The step law `P(xi = j) = 1/(j(j+1))`, its random walk and last-passage
//! time, and the coupling of that walk with the root isolation.

use rand::{Rng, SeedableRng};

use crate::destruction::{isolate_root_fast_with_sizes, sample_destruction, IsolationResult};
use crate::error::{invalid, Result};
use crate::rng::TrialRng;
use crate::tree::sample_rrt;

/// `floor(1/u)` for `u` in `(0, 1]`.
pub fn xi_from_uniform(u: f64) -> Result<usize> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(invalid(format!("uniform {u} outside (0, 1]")));
    }
    Ok((1.0 / u).floor() as usize)
}

fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// A draw of `xi` by inversion.
pub fn sample_xi<R: Rng + ?Sized>(rng: &mut R) -> usize {
    (1.0 / open_uniform(rng)).floor() as usize
}

/// A draw of `xi` conditioned on `xi >= m`: `floor(m / U)`.
pub fn sample_xi_at_least<R: Rng + ?Sized>(m: usize, rng: &mut R) -> usize {
    ((m as f64 / open_uniform(rng)).floor() as usize).max(m)
}

/// Walk with i.i.d. `xi` steps run until it first exceeds a level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomWalkPath {
    pub level: usize,
    /// All steps drawn, the last one being the first to cross the level.
    pub steps: Vec<usize>,
    /// `S_1, S_2, ...`.
    pub sums: Vec<usize>,
    /// `L(n) = max{k : S_k <= n}`.
    pub last_passage: usize,
    /// `n - S_{L(n)}`.
    pub overshoot: usize,
}

impl RandomWalkPath {
    fn from_steps(level: usize, steps: Vec<usize>) -> Self {
        let sums: Vec<usize> = steps
            .iter()
            .scan(0usize, |acc, &x| {
                *acc = acc.saturating_add(x);
                Some(*acc)
            })
            .collect();
        let last_passage = sums.iter().take_while(|&&s| s <= level).count();
        let below = if last_passage == 0 { 0 } else { sums[last_passage - 1] };
        Self {
            level,
            steps,
            sums,
            last_passage,
            overshoot: level - below,
        }
    }
}

/// Draws steps until the partial sum exceeds `n`.
pub fn walk_to_level<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RandomWalkPath {
    let mut steps = Vec::new();
    let mut sum = 0usize;
    while sum <= n {
        let x = sample_xi(rng);
        steps.push(x);
        sum = sum.saturating_add(x);
    }
    RandomWalkPath::from_steps(n, steps)
}

/// `L(n)` alone, without keeping the path.
pub fn last_passage<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    let mut sum = 0usize;
    let mut k = 0;
    loop {
        sum = sum.saturating_add(sample_xi(rng));
        if sum > n {
            return k;
        }
        k += 1;
    }
}

/// A root isolation and a walk built on one probability space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupledIsolation {
    pub walk: RandomWalkPath,
    pub isolation: IsolationResult,
    /// `|T^0_{n,0}| > |T^0_{n,1}| > ... > |T^0_{n,X_n}| = 1`.
    pub nested_sizes: Vec<usize>,
}

impl CoupledIsolation {
    /// `X_n >= L(n)`, the first `L(n)` severed sizes equal the first `L(n)`
    /// steps, and `X_n <= L(n) + n - S_{L(n)}`.
    pub fn identities_hold(&self) -> bool {
        let l = self.walk.last_passage;
        let x = self.isolation.cuts;
        x >= l
            && self.isolation.severed_sizes[..l] == self.walk.steps[..l]
            && x <= l + self.walk.overshoot
    }
}

/// Samples a tree, isolates its root, and builds the walk from the severed
/// sizes: step `i` copies the `i`-th severed size unless a coin with
/// probability `1/|T^0_{n,i-1}|` comes up, in which case it is a fresh draw of
/// `xi` conditioned to be at least `|T^0_{n,i-1}|` and the walk crosses `n`.
/// The coins and fresh draws use their own stream.
pub fn coupled_isolation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CoupledIsolation> {
    if n == 0 {
        return Err(invalid("coupling needs n >= 1"));
    }
    let trace = sample_destruction(sample_rrt(n, rng), rng)?;
    let isolation = isolate_root_fast_with_sizes(&trace)?;
    let mut aux = TrialRng::seed_from_u64(rng.random());
    let mut nested_sizes = vec![n + 1];
    for &s in &isolation.severed_sizes {
        nested_sizes.push(nested_sizes.last().expect("nonempty") - s);
    }
    let mut steps = Vec::new();
    for i in 1.. {
        let size = nested_sizes.get(i - 1).copied().unwrap_or(1);
        if aux.random_range(0..size) == 0 {
            steps.push(sample_xi_at_least(size, &mut aux));
            break;
        }
        steps.push(isolation.severed_sizes[i - 1]);
    }
    Ok(CoupledIsolation {
        walk: RandomWalkPath::from_steps(n, steps),
        isolation,
        nested_sizes,
    })
}

/// `(ln^2 n / n) x - ln n - ln ln n`, for `n >= 3`.
pub fn cauchy_statistic(x: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(invalid("the centered statistic needs n >= 3"));
    }
    let ln = (n as f64).ln();
    Ok(ln * ln / n as f64 * x - ln - ln.ln())
}
