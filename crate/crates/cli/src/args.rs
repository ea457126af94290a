use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rrtcut", version, about = "Monte Carlo experiments on random recursive trees")]
pub struct Cli {
    /// Print which statistic each subcommand computes, then exit.
    #[arg(long)]
    pub list: bool,

    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Tree size (number of edges). Comma separated list for `sweep`;
    /// accepts forms like 1e6.
    #[arg(long, value_delimiter = ',', value_parser = parse_count, global = true)]
    pub n: Vec<usize>,

    #[arg(long, default_value = "1000", value_parser = parse_count, global = true)]
    pub trials: usize,

    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Worker threads. Output does not depend on this.
    #[arg(long, env = "RRTCUT_THREADS", global = true)]
    pub threads: Option<usize>,

    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Overrides the tolerance of every pass/fail check.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Skip per-trial rows and print only the summary.
    #[arg(long, global = true)]
    pub summary_only: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampler {
    /// Sample the tree and the removal order, then replay.
    #[default]
    Tree,
    /// Follow one component at a time through the splitting property.
    Splitting,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    #[command(flatten)]
    Run(Experiment),
    /// Exact law of a statistic at small n, as rationals.
    Oracle(OracleArgs),
    /// Run an experiment at several n and report the KS trend.
    Sweep {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum Experiment {
    /// Cuts needed to isolate the root.
    IsolateRoot {
        #[arg(long, value_enum, default_value_t)]
        sampler: Sampler,
        /// Remove vertices instead of edges.
        #[arg(long)]
        vertices: bool,
    },
    /// Cuts needed to isolate 0, 1, ..., l-1 one after the other.
    IsolateMulti {
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, value_enum, default_value_t)]
        sampler: Sampler,
    },
    /// Cuts needed to isolate l independent uniform vertices.
    RandomTargets {
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, value_enum, default_value_t)]
        sampler: Sampler,
    },
    /// Cuts needed to isolate the last l vertices.
    LastTargets {
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, value_enum, default_value_t)]
        sampler: Sampler,
    },
    /// Steps until l distinct uniform vertices are pairwise disconnected.
    Disconnect {
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, value_enum, default_value_t)]
        sampler: Sampler,
    },
    /// Steps until 0, 1, ..., l-1 are pairwise disconnected.
    FirstTargetsDisconnect {
        #[arg(long, default_value_t = 2)]
        ell: usize,
    },
    /// Generation-1 sizes of the tree of component sizes.
    ComponentTree {
        /// Thresholds a for the count of normalized sizes >= a.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        levels: Vec<f64>,
        #[arg(long, value_enum, default_value_t)]
        sampler: Sampler,
    },
    /// Trunk and branches of the cut-tree.
    CutTree,
    /// Destruction in the natural order: root degree, height, saturation.
    Ordered,
    /// Collisions of the coalescent driven by exponential edge clocks.
    Coalescent,
    /// Bond percolation, supercritical (`--t`) or at fixed `--p`.
    Percolation {
        #[arg(long, conflicts_with = "p", required_unless_present = "p")]
        t: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Red balls of the Polya-Hoppe urn.
    Urn {
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Root type of the Yule process with mutations.
    Yule {
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Last passage time and overshoot of the xi random walk.
    Walk,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    /// Statistic name, e.g. X, X:2, Y:1, Z:1, A:2:3, first-cut.
    #[arg(long)]
    pub statistic: String,
}

/// Parses a nonnegative integer, allowing `1e6` and `1_000_000`.
pub fn parse_count(s: &str) -> Result<usize, String> {
    let clean = s.replace('_', "");
    if let Ok(v) = clean.parse::<usize>() {
        return Ok(v);
    }
    let f: f64 = clean.parse().map_err(|_| format!("not a count: {s}"))?;
    if f >= 0.0 && f.fract() == 0.0 && f < 2f64.powi(53) {
        Ok(f as usize)
    } else {
        Err(format!("not a count: {s}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("10_000"), Ok(10_000));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn global_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["rrtcut", "isolate-root", "--n", "1000", "--trials", "100", "--seed", "7"]).unwrap();
        assert_eq!(cli.common.n, vec![1000]);
        assert_eq!((cli.common.trials, cli.common.seed), (100, 7));
        let cli = Cli::try_parse_from(["rrtcut", "sweep", "walk", "--n", "1e3,1e4"]).unwrap();
        assert_eq!(cli.common.n, vec![1000, 10_000]);
        assert!(matches!(cli.command, Some(Command::Sweep { experiment: Experiment::Walk })));
    }
}
