//! Random cutting of random recursive trees.
//!
//! Destruction and isolation statistics, cut-trees, component-size trees,
//! the random-walk coupling, bond percolation, exact small-size laws, and the
//! limit laws used to check all of them. Every sampler takes an explicit
//! [`rand::Rng`]; [`rng::run_trials`] runs reproducible parallel trials.

pub mod component_tree;
pub mod coupling;
pub mod cut_tree;
pub mod destruction;
pub mod dsu;
pub mod error;
pub mod oracle;
pub mod percolation;
pub mod rng;
pub mod splitting;
pub mod stats;
pub mod tree;

pub use component_tree::{ComponentSizeTree, RankedNormalizedTree, UniversalIndex};
pub use coupling::{CoupledIsolation, RandomWalkPath};
pub use cut_tree::{CutNode, CutTree, TrunkDecomposition};
pub use destruction::{
    CoalescentRun, DestructionTrace, DisconnectionResult, IsolationResult, MultiIsolationResult, TargetStep,
};
pub use error::{Error, Result};
pub use oracle::{ExactDistribution, Outcome, Statistic};
pub use percolation::{PercolationOutcome, SupercriticalSummary, UrnState, YuleTrace};
pub use rng::{run_trials, trial_rng, TrialRng};
pub use stats::{EmpiricalDistribution, Reference};
pub use tree::{IncreasingTree, VertexSet};
