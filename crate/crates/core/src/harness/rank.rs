use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::RunRecord;

/// Ranks of one problem's pooled runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemRanks {
    pub problem: String,
    /// Per algorithm (in table order), the ranks of its runs in record order.
    pub ranks: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmScore {
    pub algorithm: String,
    pub total_score: f64,
    /// 1 for the lowest total; tied totals share the better position.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingTable {
    /// Algorithms in first-appearance order of the input records.
    pub algorithms: Vec<String>,
    pub problems: Vec<ProblemRanks>,
    /// Sorted ascending by total score, ties by name.
    pub scores: Vec<AlgorithmScore>,
}

impl RankingTable {
    pub fn score(&self, algorithm: &str) -> Option<f64> {
        self.scores
            .iter()
            .find(|s| s.algorithm == algorithm)
            .map(|s| s.total_score)
    }
}

/// Average ranks (1-based) of `values`, ascending. Tied values share the
/// mean of the positions they occupy. NaN sorts after everything.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let v = values[order[start]];
        let mut end = start + 1;
        while end < order.len() && same(values[order[end]], v) {
            end += 1;
        }
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a.is_nan() && b.is_nan())
}

/// Competition-style scoring: per problem, all runs of all algorithms are
/// pooled and ranked ascending; an algorithm's score is the sum of its run
/// ranks over every problem. Lower is better.
///
/// Every algorithm must have the same number of runs on every problem.
pub fn cec_rank(records: &[RunRecord]) -> Result<RankingTable> {
    if records.is_empty() {
        return Err(Error::invalid("no records to rank"));
    }
    let mut algorithms: Vec<String> = Vec::new();
    let mut problems: Vec<String> = Vec::new();
    let mut cells: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for r in records {
        let a = position_or_push(&mut algorithms, &r.algorithm);
        let p = position_or_push(&mut problems, &r.problem);
        cells.entry((p, a)).or_default().push(r.final_fitness);
    }
    let repeats = cells.values().next().map_or(0, Vec::len);
    for p in 0..problems.len() {
        for a in 0..algorithms.len() {
            let n = cells.get(&(p, a)).map_or(0, Vec::len);
            if n != repeats {
                return Err(Error::invalid(format!(
                    "unbalanced repeats: {} has {n} runs on {} where {repeats} are expected",
                    algorithms[a], problems[p]
                )));
            }
        }
    }

    let mut totals = vec![0.0; algorithms.len()];
    let mut tables = Vec::with_capacity(problems.len());
    for (p, problem) in problems.iter().enumerate() {
        let pooled: Vec<f64> = (0..algorithms.len())
            .flat_map(|a| cells[&(p, a)].iter().copied())
            .collect();
        let ranks = average_ranks(&pooled);
        let per_algorithm: Vec<Vec<f64>> = ranks.chunks(repeats).map(<[f64]>::to_vec).collect();
        for (a, r) in per_algorithm.iter().enumerate() {
            totals[a] += r.iter().sum::<f64>();
        }
        tables.push(ProblemRanks {
            problem: problem.clone(),
            ranks: per_algorithm,
        });
    }

    let mut scores: Vec<AlgorithmScore> = algorithms
        .iter()
        .zip(&totals)
        .map(|(a, &t)| AlgorithmScore {
            algorithm: a.clone(),
            total_score: t,
            rank: 0,
        })
        .collect();
    scores.sort_by(|x, y| {
        x.total_score
            .total_cmp(&y.total_score)
            .then_with(|| x.algorithm.cmp(&y.algorithm))
    });
    for i in 0..scores.len() {
        scores[i].rank = if i > 0 && scores[i].total_score == scores[i - 1].total_score {
            scores[i - 1].rank
        } else {
            i + 1
        };
    }
    Ok(RankingTable {
        algorithms,
        problems: tables,
        scores,
    })
}

fn position_or_push(list: &mut Vec<String>, name: &str) -> usize {
    match list.iter().position(|x| x == name) {
        Some(i) => i,
        None => {
            list.push(name.to_string());
            list.len() - 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn record(algorithm: &str, problem: &str, seed: u64, f: f64) -> RunRecord {
        RunRecord {
            algorithm: algorithm.into(),
            problem: problem.into(),
            seed,
            final_fitness: f,
            evaluations: 1,
            wall_time_s: 0.0,
            budget_fault: false,
            trace: vec![],
            best_position: vec![],
        }
    }

    #[test]
    fn two_by_two() {
        let records = [
            record("A", "p", 0, 1.0),
            record("A", "p", 1, 2.0),
            record("B", "p", 0, 3.0),
            record("B", "p", 1, 4.0),
        ];
        let table = cec_rank(&records).unwrap();
        assert_eq!(table.score("A"), Some(3.0));
        assert_eq!(table.score("B"), Some(7.0));
        assert_eq!(table.scores[0].rank, 1);
        assert_eq!(table.scores[1].rank, 2);
    }

    #[test]
    fn full_tie() {
        let records: Vec<_> = ["A", "B", "C"]
            .iter()
            .flat_map(|a| (0..2).map(move |s| record(a, "p", s, 5.0)))
            .collect();
        let table = cec_rank(&records).unwrap();
        for s in &table.scores {
            assert_eq!(s.total_score, 7.0);
            assert_eq!(s.rank, 1);
        }
    }

    #[test]
    fn unbalanced_rejected() {
        let records = [
            record("A", "p", 0, 1.0),
            record("A", "p", 1, 2.0),
            record("B", "p", 0, 3.0),
        ];
        assert!(matches!(cec_rank(&records), Err(Error::InvalidArgument(_))));
        let missing = [record("A", "p", 0, 1.0), record("B", "q", 0, 1.0)];
        assert!(cec_rank(&missing).is_err());
        assert!(cec_rank(&[]).is_err());
    }

    #[test]
    fn average_ranks_small() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), [3.5, 1.0, 3.5, 2.0]);
        assert_eq!(average_ranks(&[f64::NAN, 0.0]), [2.0, 1.0]);
        assert!(average_ranks(&[]).is_empty());
    }
}
