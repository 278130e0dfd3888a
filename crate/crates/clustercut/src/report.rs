//! Aggregation over repetitions and the CSV/JSON report shapes.

use clustercut_core::reconstruct::{pairwise_sum, witness_terms, Parity, ScalingRow, WitnessReport};
use serde::{Deserialize, Serialize};

use crate::error::CliResult;

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = pairwise_sum(v) / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let ss: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    (mean, (pairwise_sum(&ss) / (n - 1.0)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermStat {
    pub subset: Vec<usize>,
    pub pauli: String,
    pub mean: f64,
    pub stddev: f64,
}

/// Per-term expectations for both witnesses plus the bound, over repetitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermsReport {
    pub n: usize,
    pub repetitions: usize,
    pub odd: Vec<TermStat>,
    pub even: Vec<TermStat>,
    pub odd_avg: f64,
    pub even_avg: f64,
    pub bound: f64,
    pub bound_stddev: f64,
}

impl TermsReport {
    pub fn aggregate(reports: &[WitnessReport]) -> CliResult<Self> {
        let n = reports[0].n;
        let stats = |parity: Parity| -> CliResult<Vec<TermStat>> {
            let terms = witness_terms(n, parity)?;
            Ok(terms
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let v: Vec<f64> = reports.iter().map(|r| r.terms(parity)[i]).collect();
                    let (mean, stddev) = mean_std(&v);
                    TermStat { subset: t.subset.clone(), pauli: t.pauli.to_string(), mean, stddev }
                })
                .collect())
        };
        let col = |f: fn(&WitnessReport) -> f64| reports.iter().map(f).collect::<Vec<_>>();
        let (bound, bound_stddev) = mean_std(&col(|r| r.bound));
        Ok(Self {
            n,
            repetitions: reports.len(),
            odd: stats(Parity::Odd)?,
            even: stats(Parity::Even)?,
            odd_avg: mean_std(&col(|r| r.odd_avg)).0,
            even_avg: mean_std(&col(|r| r.even_avg)).0,
            bound,
            bound_stddev,
        })
    }

    pub fn term_means(&self, parity: Parity) -> Vec<f64> {
        let t = match parity {
            Parity::Odd => &self.odd,
            Parity::Even => &self.even,
        };
        t.iter().map(|s| s.mean).collect()
    }
}

/// One line of `scaling.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingStat {
    pub n: usize,
    pub n_terms: u64,
    pub odd_avg: f64,
    pub even_avg: f64,
    pub bound: f64,
    pub bound_stddev: f64,
    pub time_ms: f64,
}

pub const SCALING_HEADER: &str = "n,odd_avg,even_avg,bound,bound_stddev,time_ms";

/// `sweeps[rep][row]`; time is the mean over repetitions.
pub fn aggregate_scaling(sweeps: &[Vec<ScalingRow>]) -> Vec<ScalingStat> {
    (0..sweeps[0].len())
        .map(|i| {
            let col = |f: &dyn Fn(&ScalingRow) -> f64| sweeps.iter().map(|s| f(&s[i])).collect::<Vec<_>>();
            let (bound, bound_stddev) = mean_std(&col(&|r| r.bound));
            ScalingStat {
                n: sweeps[0][i].n,
                n_terms: sweeps[0][i].n_terms,
                odd_avg: mean_std(&col(&|r| r.odd_avg)).0,
                even_avg: mean_std(&col(&|r| r.even_avg)).0,
                bound,
                bound_stddev,
                time_ms: mean_std(&col(&|r| r.postprocess_time.as_secs_f64() * 1e3)).0,
            }
        })
        .collect()
}

pub fn scaling_csv(rows: &[ScalingStat]) -> String {
    let mut s = String::from(SCALING_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{},{},{},{},{},{:.3}\n", r.n, r.odd_avg, r.even_avg, r.bound, r.bound_stddev, r.time_ms));
    }
    s
}

/// Parsed `scaling.csv` row: `(n, odd_avg, even_avg, bound, bound_stddev, time_ms)`.
pub fn parse_scaling_csv(text: &str) -> Option<Vec<[f64; 6]>> {
    let mut lines = text.lines();
    if lines.next()? != SCALING_HEADER {
        return None;
    }
    lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().ok()).collect::<Option<_>>()?;
            v.try_into().ok()
        })
        .collect()
}
