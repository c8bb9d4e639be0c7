use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::RunRecord;

/// Descriptive statistics of final fitness for one algorithm on one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algorithm: String,
    pub problem: String,
    pub runs: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
}

/// Quantile `q` in [0, 1] of ascending `sorted`, by linear interpolation
/// between closest ranks.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn describe(algorithm: &str, problem: &str, values: &[f64]) -> SummaryRow {
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    SummaryRow {
        algorithm: algorithm.to_string(),
        problem: problem.to_string(),
        runs: n,
        mean,
        median: quantile(&sorted, 0.5),
        std,
        q1: quantile(&sorted, 0.25),
        q3: quantile(&sorted, 0.75),
        min: sorted[0],
        max: sorted[n - 1],
    }
}

/// One row per (algorithm, problem) pair in first-appearance order.
pub fn summarize(records: &[RunRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::invalid("no records to summarize"));
    }
    let mut groups: Vec<(&str, &str, Vec<f64>)> = Vec::new();
    for r in records {
        match groups
            .iter_mut()
            .find(|(a, p, _)| *a == r.algorithm && *p == r.problem)
        {
            Some(g) => g.2.push(r.final_fitness),
            None => groups.push((&r.algorithm, &r.problem, vec![r.final_fitness])),
        }
    }
    Ok(groups
        .iter()
        .map(|(a, p, v)| describe(a, p, v))
        .collect())
}
