//! Output records and the per-statistic summary.

use std::io::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rrtcut::stats::ks_statistic;
use rrtcut::EmpiricalDistribution;
use serde::Serialize;

use crate::args::{Common, Format};
use crate::experiment::{Check, StatDef};
use crate::CliError;

/// One trial's value of one statistic.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub experiment: &'static str,
    pub n: usize,
    pub trial: u64,
    pub stat: String,
    pub raw: f64,
    pub normalized: f64,
    pub ref_cdf: Option<f64>,
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub experiment: &'static str,
    pub n: usize,
    pub stat: String,
    pub trials: usize,
    pub mean: f64,
    pub variance: f64,
    pub ks: Option<f64>,
    pub ks_trend: &'static str,
}

/// One atom of an exact law.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub value: String,
    pub probability: String,
    pub approx: f64,
}

impl OracleRow {
    pub fn new(value: String, p: &BigRational) -> Self {
        OracleRow { value, probability: p.to_string(), approx: p.to_f64().unwrap_or(f64::NAN) }
    }
}

/// CSV with a header row, or one JSON object per line.
pub fn write_records<W: Write, T: Serialize>(w: &mut W, format: Format, rows: &[T]) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut cw = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
            for r in rows {
                cw.serialize(r)?;
            }
            cw.flush()?;
        }
        Format::Jsonl => {
            for r in rows {
                serde_json::to_writer(&mut *w, r)?;
                w.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatSummary {
    pub stat: String,
    pub mean: f64,
    pub variance: f64,
    pub ks: Option<f64>,
    /// What the statistic is held to, e.g. `KS vs beta(1,1) <= 0.1`.
    pub check: String,
    pub passed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub experiment: &'static str,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub stats: Vec<StatSummary>,
}

impl Summary {
    pub fn compute(
        experiment: &'static str,
        n: usize,
        common: &Common,
        defs: &[StatDef],
        rows: &[ResultRow],
    ) -> Result<Self, CliError> {
        let k = defs.len();
        let stats = defs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let values: Vec<f64> = rows.iter().skip(i).step_by(k).map(|r| r.normalized).collect();
                let e = EmpiricalDistribution::new(values)?;
                let (mean, variance) = (e.mean(), e.variance());
                let (ks, check, passed) = match &d.check {
                    Check::None => (None, String::new(), None),
                    Check::Ks { reference, tol } => {
                        let ks = ks_statistic(&e, reference)?;
                        (Some(ks), format!("KS vs {} <= {tol}", reference.name()), Some(ks <= *tol))
                    }
                    Check::Mean { target, tol } => {
                        (None, format!("|mean - {target:.6}| <= {tol:.6}"), Some((mean - target).abs() <= *tol))
                    }
                };
                Ok(StatSummary { stat: d.name.clone(), mean, variance, ks, check, passed })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Summary { experiment, n, trials: common.trials, seed: common.seed, stats })
    }

    pub fn write_text<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "# {} n={} trials={} seed={}", self.experiment, self.n, self.trials, self.seed)?;
        for s in &self.stats {
            let ks = s.ks.map_or("-".to_string(), |v| format!("{v:.5}"));
            let verdict = match s.passed {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "-",
            };
            writeln!(
                w,
                "# {:<20} mean={:<12.6} variance={:<12.6} ks={:<8} {verdict:<4} {}",
                s.stat, s.mean, s.variance, ks, s.check
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_jsonl_layout() {
        let rows = vec![ResultRow {
            experiment: "walk",
            n: 10,
            trial: 0,
            stat: "overshoot".into(),
            raw: 2.0,
            normalized: 0.5,
            ref_cdf: None,
        }];
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Csv, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "experiment,n,trial,stat,raw,normalized,ref_cdf\nwalk,10,0,overshoot,2.0,0.5,\n"
        );
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Jsonl, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"experiment\":\"walk\",\"n\":10,\"trial\":0,\"stat\":\"overshoot\",\"raw\":2.0,\"normalized\":0.5,\"ref_cdf\":null}\n"
        );
    }

    #[test]
    fn oracle_rows() {
        let r = OracleRow::new("2".into(), &BigRational::new(7.into(), 4.into()));
        assert_eq!((r.probability.as_str(), r.approx), ("7/4", 1.75));
    }
}
