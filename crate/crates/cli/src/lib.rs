//! Experiment runner behind the `rrtcut` binary.
//!
//! Every trial draws from its own random stream keyed by the seed and the
//! trial index, rows are buffered and written in trial order, so the output
//! for a fixed seed is byte-identical for any number of threads.

pub mod args;
pub mod experiment;
pub mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rrtcut::oracle::{exact_isolation_law, exhaustive_destruction};
use rrtcut::stats::is_nonincreasing;
use rrtcut::{run_trials, Outcome, Statistic};

use args::{Cli, Command, Common, Experiment};
use experiment::{Check, LISTING};
use report::{OracleRow, ResultRow, Summary, SweepRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rrtcut::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad configurations, 3 for failed output.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 3,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Everything one experiment produced at one `n`.
#[derive(Debug)]
pub struct Outcomes {
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
}

/// Runs `trials` trials of `exp` at size `n` on the current thread pool.
pub fn run_experiment(exp: &Experiment, n: usize, common: &Common) -> Result<Outcomes, CliError> {
    if common.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let mut defs = exp.stats(n)?;
    if let Some(tol) = common.tolerance {
        if tol.is_nan() || tol < 0.0 {
            return Err(usage("--tolerance must be nonnegative"));
        }
        for d in &mut defs {
            match &mut d.check {
                Check::Ks { tol: t, .. } | Check::Mean { tol: t, .. } => *t = tol,
                Check::None => {}
            }
        }
    }
    let per_trial = run_trials(common.seed, exp.tag(), common.trials, |trial, rng| {
        let raw = exp.trial(n, rng)?;
        raw.iter()
            .zip(&defs)
            .map(|(&x, d)| {
                let normalized = d.normalization.apply(x, n)?;
                let ref_cdf = d.reference().map(|r| r.cdf(normalized)).transpose()?;
                Ok(ResultRow {
                    experiment: exp.name(),
                    n,
                    trial,
                    stat: d.name.clone(),
                    raw: x,
                    normalized,
                    ref_cdf,
                })
            })
            .collect::<rrtcut::Result<Vec<_>>>()
    });
    let rows: Vec<ResultRow> = per_trial.into_iter().collect::<rrtcut::Result<Vec<_>>>()?.into_iter().flatten().collect();
    let summary = Summary::compute(exp.name(), n, common, &defs, &rows)?;
    Ok(Outcomes { rows, summary })
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn single_n(common: &Common) -> Result<usize, CliError> {
    match common.n.as_slice() {
        [n] => Ok(*n),
        [] => Err(usage("--n is required")),
        _ => Err(usage("several --n values given; use `sweep` for a list")),
    }
}

fn run_one(exp: &Experiment, common: &Common) -> Result<(), CliError> {
    let n = single_n(common)?;
    let out = run_experiment(exp, n, common)?;
    let mut w = open_output(common.output.as_deref())?;
    if !common.summary_only {
        report::write_records(&mut w, common.format, &out.rows)?;
    }
    w.flush()?;
    let mut err = io::stderr().lock();
    out.summary.write_text(&mut err)?;
    Ok(())
}

fn run_sweep(exp: &Experiment, common: &Common) -> Result<(), CliError> {
    let ns = &common.n;
    if ns.len() < 2 {
        return Err(usage("sweep needs at least two --n values"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("sweep --n values must be strictly increasing"));
    }
    let mut rows_out = match (&common.output, common.summary_only) {
        (Some(p), false) => Some(open_output(Some(p))?),
        _ => None,
    };
    let mut summaries = Vec::new();
    for &n in ns {
        let out = run_experiment(exp, n, common)?;
        if let Some(w) = rows_out.as_mut() {
            report::write_records(w, common.format, &out.rows)?;
        }
        summaries.push(out.summary);
    }
    if let Some(mut w) = rows_out {
        w.flush()?;
    }

    let mut report = Vec::new();
    let mut verdicts = Vec::new();
    for (i, stat) in summaries[0].stats.iter().enumerate() {
        let ks: Option<Vec<f64>> = summaries.iter().map(|s| s.stats[i].ks).collect();
        let trend = match &ks {
            Some(v) if is_nonincreasing(v) => "nonincreasing",
            Some(_) => "not-nonincreasing",
            None => "",
        };
        if !trend.is_empty() {
            verdicts.push(format!("{} {}: KS {trend}", exp.name(), stat.stat));
        }
        for s in &summaries {
            let st = &s.stats[i];
            report.push(SweepRow {
                experiment: exp.name(),
                n: s.n,
                stat: st.stat.clone(),
                trials: s.trials,
                mean: st.mean,
                variance: st.variance,
                ks: st.ks,
                ks_trend: trend,
            });
        }
    }
    let mut w = BufWriter::new(io::stdout().lock());
    report::write_records(&mut w, common.format, &report)?;
    w.flush()?;
    let mut err = io::stderr().lock();
    for s in &summaries {
        s.write_text(&mut err)?;
    }
    for v in verdicts {
        writeln!(err, "# {v}")?;
    }
    Ok(())
}

fn run_oracle(statistic: &str, common: &Common) -> Result<(), CliError> {
    let n = single_n(common)?;
    let stat: Statistic = statistic.parse()?;
    let rows: Vec<OracleRow> = if stat == Statistic::RootIsolation {
        exact_isolation_law(n)?.iter().map(|(k, p)| OracleRow::new(k.to_string(), p)).collect()
    } else {
        let law = exhaustive_destruction(n, &stat)?;
        law.iter()
            .map(|(k, p)| {
                let value = match k {
                    Outcome::Count(c) => c.to_string(),
                    Outcome::Shape(s) => s.clone(),
                };
                OracleRow::new(value, p)
            })
            .collect()
    };
    let mut w = open_output(common.output.as_deref())?;
    report::write_records(&mut w, common.format, &rows)?;
    w.flush()?;
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if cli.list {
        let mut out = io::stdout().lock();
        for (cmd, what) in LISTING {
            writeln!(out, "{cmd}\t{what}")?;
        }
        return Ok(());
    }
    let command = cli.command.ok_or_else(|| usage("no subcommand given; see --help"))?;
    let common = cli.common;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| usage(format!("thread pool: {e}")))?;
    pool.install(|| match &command {
        Command::Run(exp) => run_one(exp, &common),
        Command::Sweep { experiment } => run_sweep(experiment, &common),
        Command::Oracle(o) => run_oracle(&o.statistic, &common),
    })
}
