//! What each subcommand measures: raw statistics per trial, their
//! normalization, and the reference law or target mean they are checked
//! against.

use rand::Rng;
use rrtcut::coupling::{cauchy_statistic, walk_to_level};
use rrtcut::cut_tree::{build_cut_tree, height_saturation_of, ordered_leaf_depths, trunk_decomposition};
use rrtcut::component_tree::{build_component_tree, generation_slice, rank_and_normalize};
use rrtcut::destruction::{
    self, disconnect_targets, gm_coalescent, isolate_first_ell, isolate_root_by_vertex_removal, isolate_targets,
    sample_destruction,
};
use rrtcut::percolation::{polya_hoppe_urn, sample_cluster_sizes, root_fluctuation_statistic, supercritical_p, yule_with_mutations};
use rrtcut::rng::tags;
use rrtcut::stats::alpha_constants;
use rrtcut::tree::sample_rrt;
use rrtcut::{splitting, DestructionTrace, Reference, Result, TrialRng, VertexSet};

use crate::args::{Experiment, Sampler};
use crate::CliError;

/// Default KS tolerance of checks against a limit law.
pub const DEFAULT_KS_TOL: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Normalization {
    Raw,
    /// `(ln n / n) x`
    LnOverN,
    /// `(ln^2 n / n) x - ln n - ln ln n`
    Cauchy,
    /// `x / n`
    Fraction,
    /// `x / n^p`
    Power(f64),
    /// `ln(1 + x) / ln n`
    LogExponent,
    /// `ln x / ln n`
    Log,
    /// `(x - ln n) / sqrt(ln n)`
    CenteredLog,
    /// `x / ln n`
    PerLog,
    /// `(x/n - e^{-t}) ln n - t e^{-t} ln ln n`
    RootFluctuation { t: f64 },
}

impl Normalization {
    pub fn apply(self, x: f64, n: usize) -> Result<f64> {
        let nf = n as f64;
        let ln = nf.ln();
        Ok(match self {
            Normalization::Raw => x,
            Normalization::LnOverN => ln / nf * x,
            Normalization::Cauchy => cauchy_statistic(x, n)?,
            Normalization::Fraction => x / nf,
            Normalization::Power(p) => x / nf.powf(p),
            Normalization::LogExponent => (1.0 + x).ln() / ln,
            Normalization::Log => x.max(1.0).ln() / ln,
            Normalization::CenteredLog => (x - ln) / ln.sqrt(),
            Normalization::PerLog => x / ln,
            Normalization::RootFluctuation { t } => root_fluctuation_statistic(x as usize, n, t),
        })
    }

    /// Smallest `n` for which the normalization is defined.
    fn min_n(self) -> usize {
        match self {
            Normalization::Raw | Normalization::Fraction | Normalization::Power(_) => 1,
            Normalization::Cauchy | Normalization::RootFluctuation { .. } => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    None,
    /// KS distance of the normalized values to a reference law.
    Ks { reference: Reference, tol: f64 },
    /// Absolute distance of the mean normalized value to a target.
    Mean { target: f64, tol: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatDef {
    pub name: String,
    pub normalization: Normalization,
    pub check: Check,
}

impl StatDef {
    fn new(name: impl Into<String>, normalization: Normalization, check: Check) -> Self {
        StatDef { name: name.into(), normalization, check }
    }

    pub fn reference(&self) -> Option<&Reference> {
        match &self.check {
            Check::Ks { reference, .. } => Some(reference),
            _ => None,
        }
    }
}

fn ks(reference: Reference) -> Check {
    Check::Ks { reference, tol: DEFAULT_KS_TOL }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::IsolateRoot { .. } => "isolate-root",
            Experiment::IsolateMulti { .. } => "isolate-multi",
            Experiment::RandomTargets { .. } => "random-targets",
            Experiment::LastTargets { .. } => "last-targets",
            Experiment::Disconnect { .. } => "disconnect",
            Experiment::FirstTargetsDisconnect { .. } => "first-targets-disconnect",
            Experiment::ComponentTree { .. } => "component-tree",
            Experiment::CutTree => "cut-tree",
            Experiment::Ordered => "ordered",
            Experiment::Coalescent => "coalescent",
            Experiment::Percolation { .. } => "percolation",
            Experiment::Urn { .. } => "urn",
            Experiment::Yule { .. } => "yule",
            Experiment::Walk => "walk",
        }
    }

    pub fn tag(&self) -> u64 {
        match self {
            Experiment::IsolateRoot { vertices: true, .. } => tags::VERTEX_REMOVAL,
            Experiment::IsolateRoot { sampler: Sampler::Splitting, .. }
            | Experiment::IsolateMulti { sampler: Sampler::Splitting, .. }
            | Experiment::RandomTargets { sampler: Sampler::Splitting, .. }
            | Experiment::LastTargets { sampler: Sampler::Splitting, .. }
            | Experiment::Disconnect { sampler: Sampler::Splitting, .. }
            | Experiment::ComponentTree { sampler: Sampler::Splitting, .. } => tags::SPLITTING,
            Experiment::RandomTargets { .. } | Experiment::Disconnect { .. } => tags::TARGETS,
            Experiment::Ordered => tags::TREE,
            Experiment::Coalescent => tags::COALESCENT,
            Experiment::Percolation { .. } => tags::PERCOLATION,
            Experiment::Urn { .. } => tags::URN,
            Experiment::Yule { .. } => tags::YULE,
            Experiment::Walk => tags::WALK,
            _ => tags::DESTRUCTION,
        }
    }

    /// Statistics reported per trial at size `n`, after validating the
    /// parameters.
    pub fn stats(&self, n: usize) -> std::result::Result<Vec<StatDef>, CliError> {
        let ell_range = |ell: usize, lo: usize| {
            if ell < lo || ell > n + 1 {
                Err(usage(format!("--ell must be in {lo}..={} for n = {n}, got {ell}", n + 1)))
            } else {
                Ok(())
            }
        };
        let check_p = |p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(usage(format!("--p must lie in [0, 1], got {p}")))
            }
        };
        let defs = match self {
            Experiment::IsolateRoot { vertices: true, .. } => {
                vec![StatDef::new("V", Normalization::LnOverN, Check::Mean { target: 1.0, tol: 0.2 })]
            }
            Experiment::IsolateRoot { .. } => vec![
                StatDef::new("X", Normalization::Cauchy, ks(Reference::CauchyLimit)),
                StatDef::new("X_scaled", Normalization::LnOverN, Check::Mean { target: 1.0, tol: 0.07 }),
            ],
            Experiment::IsolateMulti { ell, sampler } => {
                ell_range(*ell, 1)?;
                let mut d = vec![StatDef::new(format!("X'_{ell}"), Normalization::Cauchy, ks(Reference::CauchyLimit))];
                if *sampler == Sampler::Tree {
                    for i in 1..*ell {
                        d.push(StatDef::new(format!("stage_exponent_{i}"), Normalization::Log, ks(Reference::Uniform)));
                    }
                }
                d
            }
            Experiment::RandomTargets { ell, .. } => {
                ell_range(*ell, 1)?;
                (1..=*ell)
                    .map(|i| StatDef::new(format!("Y_{i}"), Normalization::LnOverN, ks(Reference::Beta { a: i as f64, b: 1.0 })))
                    .collect()
            }
            Experiment::LastTargets { ell, sampler } => {
                ell_range(*ell, 1)?;
                if *sampler == Sampler::Splitting && *ell != 1 {
                    return Err(usage("the splitting sampler handles only --ell 1 for last-targets"));
                }
                (1..=*ell)
                    .map(|i| StatDef::new(format!("Z_{i}"), Normalization::LnOverN, ks(Reference::Beta { a: i as f64, b: 1.0 })))
                    .collect()
            }
            Experiment::Disconnect { ell, .. } | Experiment::FirstTargetsDisconnect { ell } => {
                ell_range(*ell, 2)?;
                let letter = if matches!(self, Experiment::Disconnect { .. }) { "A" } else { "B" };
                (2..=*ell)
                    .map(|k| {
                        StatDef::new(
                            format!("{letter}_{k}"),
                            Normalization::LnOverN,
                            ks(Reference::OrderStat { i: k - 1, ell: *ell }),
                        )
                    })
                    .collect()
            }
            Experiment::ComponentTree { levels, .. } => {
                if levels.iter().any(|a| a.is_nan() || *a <= 0.0) {
                    return Err(usage("--levels must be positive"));
                }
                let mut d = vec![StatDef::new("largest", Normalization::Raw, Check::Ks {
                    reference: Reference::Frechet { c: 1.0 },
                    tol: 0.05,
                })];
                for a in levels {
                    d.push(StatDef::new(format!("count_ge_{a}"), Normalization::Raw, Check::Mean {
                        target: 1.0 / a,
                        tol: 0.1 / a,
                    }));
                }
                d
            }
            Experiment::CutTree => vec![
                StatDef::new("trunk", Normalization::Cauchy, ks(Reference::CauchyLimit)),
                StatDef::new("branch_ratio", Normalization::Raw, Check::None),
            ],
            Experiment::Ordered => {
                let (lo, hi) = alpha_constants();
                vec![
                    StatDef::new("root_degree", Normalization::CenteredLog, ks(Reference::standard_normal())),
                    StatDef::new("height", Normalization::PerLog, Check::Mean { target: hi, tol: 0.5 }),
                    StatDef::new("saturation", Normalization::PerLog, Check::Mean { target: lo, tol: 0.1 }),
                ]
            }
            Experiment::Coalescent => {
                vec![StatDef::new("collisions", Normalization::Cauchy, ks(Reference::CauchyLimit))]
            }
            Experiment::Percolation { t: Some(t), .. } => {
                supercritical_p(n, *t)?;
                let e = (-t).exp();
                vec![
                    StatDef::new("root_fraction", Normalization::Fraction, Check::Mean { target: e, tol: 0.05 * e }),
                    StatDef::new("largest_nonroot", Normalization::LnOverN, ks(Reference::Frechet { c: t * e })),
                    StatDef::new(
                        "fluctuation",
                        Normalization::RootFluctuation { t: *t },
                        ks(Reference::root_cluster_fluctuation(*t)),
                    ),
                ]
            }
            Experiment::Percolation { p, .. } => {
                let p = p.ok_or_else(|| usage("percolation needs --t or --p"))?;
                check_p(p)?;
                vec![StatDef::new("root_cluster", Normalization::Power(p), Check::None)]
            }
            Experiment::Urn { p } => {
                check_p(*p)?;
                vec![StatDef::new("red", Normalization::Power(*p), Check::None)]
            }
            Experiment::Yule { p } => {
                check_p(*p)?;
                vec![StatDef::new("root_type", Normalization::Power(*p), Check::None)]
            }
            Experiment::Walk => vec![
                StatDef::new("last_passage", Normalization::Cauchy, ks(Reference::CauchyLimit)),
                StatDef::new("overshoot", Normalization::LogExponent, ks(Reference::Uniform)),
            ],
        };
        if let Some(d) = defs.iter().find(|d| n < d.normalization.min_n()) {
            return Err(usage(format!("{} needs n >= {}", d.name, d.normalization.min_n())));
        }
        Ok(defs)
    }

    /// Raw values of one trial, aligned with [`Experiment::stats`].
    pub fn trial(&self, n: usize, rng: &mut TrialRng) -> Result<Vec<f64>> {
        let trace = |rng: &mut TrialRng| -> Result<DestructionTrace> { sample_destruction(sample_rrt(n, rng), rng) };
        let f = |v: usize| v as f64;
        Ok(match self {
            Experiment::IsolateRoot { vertices: true, .. } => {
                vec![f(isolate_root_by_vertex_removal(&sample_rrt(n, rng), rng))]
            }
            Experiment::IsolateRoot { sampler, .. } => {
                let x = f(match sampler {
                    Sampler::Tree => destruction::sample_isolation_count(n, rng),
                    Sampler::Splitting => splitting::root_isolation_count(n, rng),
                });
                vec![x, x]
            }
            Experiment::IsolateMulti { ell, sampler: Sampler::Tree } => {
                let r = isolate_first_ell(&trace(rng)?, *ell)?;
                let mut v = vec![f(r.total_cuts)];
                v.extend(r.stage_sizes[1..].iter().map(|&s| f(s)));
                v
            }
            Experiment::IsolateMulti { ell, sampler: Sampler::Splitting } => {
                vec![f(splitting::first_targets_count(n, *ell, rng)?)]
            }
            Experiment::RandomTargets { ell, sampler: Sampler::Tree } => {
                let t = trace(rng)?;
                let targets: Vec<usize> = (0..*ell).map(|_| rng.random_range(0..=n)).collect();
                (1..=*ell)
                    .map(|i| Ok(f(isolate_targets(&t, &VertexSet::new(targets[..i].to_vec())?)?)))
                    .collect::<Result<_>>()?
            }
            Experiment::RandomTargets { ell, sampler: Sampler::Splitting } => {
                splitting::random_targets_counts(n, *ell, rng)?.into_iter().map(f).collect()
            }
            Experiment::LastTargets { ell, sampler: Sampler::Tree } => {
                let t = trace(rng)?;
                (1..=*ell)
                    .map(|i| Ok(f(isolate_targets(&t, &VertexSet::range(n + 1 - i, n)?)?)))
                    .collect::<Result<_>>()?
            }
            Experiment::LastTargets { sampler: Sampler::Splitting, .. } => vec![f(splitting::last_vertex_count(n, rng))],
            Experiment::Disconnect { ell, sampler: Sampler::Tree } => {
                let t = trace(rng)?;
                let targets = distinct_uniform(n, *ell, rng);
                disconnect_targets(&t, &VertexSet::new(targets)?)?.counts.into_iter().map(f).collect()
            }
            Experiment::Disconnect { ell, sampler: Sampler::Splitting } => {
                splitting::disconnection_counts(n, *ell, rng)?.into_iter().map(f).collect()
            }
            Experiment::FirstTargetsDisconnect { ell } => {
                disconnect_targets(&trace(rng)?, &VertexSet::range(0, ell - 1)?)?.counts.into_iter().map(f).collect()
            }
            Experiment::ComponentTree { levels, sampler } => {
                let values: Vec<f64> = match sampler {
                    Sampler::Tree => {
                        let ct = build_component_tree(&trace(rng)?);
                        generation_slice(&rank_and_normalize(&ct, rng)?, 1, usize::MAX)?
                    }
                    Sampler::Splitting => {
                        let scale = (n as f64).ln() / n as f64;
                        splitting::root_isolation_sizes(n, rng).into_iter().map(|s| f(s) * scale).collect()
                    }
                };
                let mut v = vec![values.iter().copied().fold(0.0, f64::max)];
                v.extend(levels.iter().map(|a| f(values.iter().filter(|&&x| x >= *a).count())));
                v
            }
            Experiment::CutTree => {
                let td = trunk_decomposition(&build_cut_tree(&trace(rng)?));
                vec![f(td.trunk_length()), td.max_branch_depth() as f64 / td.trunk_length().max(1) as f64]
            }
            Experiment::Ordered => {
                let depths = ordered_leaf_depths(&sample_rrt(n, rng));
                let (height, saturation) = height_saturation_of(&depths);
                vec![f(depths[0]), f(height), f(saturation)]
            }
            Experiment::Coalescent => vec![f(gm_coalescent(&sample_rrt(n, rng), rng)?.collisions())],
            Experiment::Percolation { t: Some(t), .. } => {
                let (root, rest) = sample_cluster_sizes(n, supercritical_p(n, *t)?, rng)?;
                let largest = rest.first().copied().unwrap_or(0);
                vec![f(root), f(largest), f(root)]
            }
            Experiment::Percolation { p, .. } => {
                let p = p.expect("validated");
                vec![f(sample_cluster_sizes(n, p, rng)?.0)]
            }
            Experiment::Urn { p } => vec![f(polya_hoppe_urn(n, *p, rng)?.red)],
            Experiment::Yule { p } => vec![f(yule_with_mutations(n, *p, rng)?.final_root_type())],
            Experiment::Walk => {
                let w = walk_to_level(n, rng);
                vec![f(w.last_passage), f(w.overshoot)]
            }
        })
    }
}

fn distinct_uniform(n: usize, ell: usize, rng: &mut TrialRng) -> Vec<usize> {
    rand::seq::index::sample(rng, n + 1, ell).into_vec()
}

/// One line per subcommand: what it computes and how it is normalized.
pub const LISTING: &[(&str, &str)] = &[
    ("isolate-root", "X_n, cuts to isolate the root; (ln^2 n/n)X_n - ln n - ln ln n vs the asymmetric Cauchy limit; --vertices: vertex-removal count, (ln n/n)V_n -> 1"),
    ("isolate-multi", "X'_{n,l}, staged isolation of 0..l-1; same centering as X_n; stage size exponents ln|tau_i|/ln n vs uniform"),
    ("random-targets", "Y_{n,1..l}, isolation of l i.i.d. uniform vertices; (ln n/n)Y_{n,i} vs beta(i,1)"),
    ("last-targets", "Z_{n,1..l}, isolation of the last l vertices; (ln n/n)Z_{n,i} vs beta(i,1)"),
    ("disconnect", "A_{n,2..l}, steps until l distinct uniform vertices are disconnected; (ln n/n)A_{n,k} vs the (k-1)-th of l uniform order statistics"),
    ("first-targets-disconnect", "B_{n,2..l}, the same for the vertices 0..l-1"),
    ("component-tree", "generation-1 sizes of the tree of component sizes, scaled by ln n/n; largest vs exp(-1/x), count >= a with mean 1/a"),
    ("cut-tree", "trunk length of the cut-tree (= X_n) and max branch depth / trunk length"),
    ("ordered", "natural-order destruction: root degree (d-ln n)/sqrt(ln n) vs normal; height and saturation level over ln n vs the roots of a ln(2e/a) = 1"),
    ("coalescent", "collisions of the exponential-clock coalescent (= X_n in law); Cauchy centering"),
    ("percolation", "bond percolation at p = 1 - t/ln n: C_0/n -> e^{-t}, (ln n/n)C_1 vs exp(-t e^{-t}/x), root-cluster fluctuations vs a scaled Cauchy limit; or at fixed --p: n^{-p}C_0"),
    ("urn", "red balls of the Polya-Hoppe urn (= root cluster size at retention p), scaled by n^{-p}"),
    ("yule", "root-type population of the Yule process with mutations when the population reaches n+1, scaled by n^{-p}"),
    ("walk", "last passage time L(n) of the xi random walk (Cauchy centering) and overshoot exponent ln(1+n-S_L)/ln n vs uniform"),
    ("oracle", "exact rational law at small n (X_n up to n = 200 by recursion, everything else by exhaustive enumeration for n <= 6)"),
    ("sweep", "any experiment above at several n, with per-n KS and a monotonicity verdict"),
];
