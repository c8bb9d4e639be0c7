use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::baselines::{Algorithm, Baseline, BaselineConfig};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::oio::{Oio, OioConfig};
use crate::optimizer::{execute, Optimizer};
use crate::record::RunRecord;
use crate::rng::derive_seed;

/// An optimizer entry of an experiment plan.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    Oio(OioConfig),
    Baseline(BaselineConfig),
}

impl AlgorithmSpec {
    /// OIO followed by the five baselines, all at default settings.
    pub fn defaults() -> Vec<AlgorithmSpec> {
        let mut all = vec![AlgorithmSpec::Oio(OioConfig::default())];
        all.extend(
            Algorithm::ALL
                .into_iter()
                .map(|a| AlgorithmSpec::Baseline(BaselineConfig::new(a))),
        );
        all
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::Oio(_) => "OIO",
            AlgorithmSpec::Baseline(c) => c.algorithm.tag(),
        }
    }

    pub fn build(&self) -> Box<dyn Optimizer> {
        match self {
            AlgorithmSpec::Oio(c) => Box::new(Oio::new(c.clone())),
            AlgorithmSpec::Baseline(c) => Box::new(Baseline::new(c.clone())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlgorithmSpec::Oio(c) => c.validate(),
            AlgorithmSpec::Baseline(c) => c.validate(),
        }
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmSpec {
    type Err = Error;

    /// Parses an algorithm tag (case-insensitive) into its default settings.
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("oio") {
            return Ok(AlgorithmSpec::Oio(OioConfig::default()));
        }
        s.parse::<Algorithm>()
            .map(|a| AlgorithmSpec::Baseline(BaselineConfig::new(a)))
            .map_err(|_| {
                Error::invalid(format!(
                    "unknown algorithm '{s}'; expected one of {}",
                    valid_algorithm_names().join(", ")
                ))
            })
    }
}

pub fn valid_algorithm_names() -> Vec<&'static str> {
    AlgorithmSpec::defaults().iter().map(|a| a.name()).collect()
}

/// Parses a comma-separated algorithm list. Duplicates are rejected.
pub fn parse_algorithms(list: &str) -> Result<Vec<AlgorithmSpec>> {
    let mut out: Vec<AlgorithmSpec> = Vec::new();
    for tag in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let spec: AlgorithmSpec = tag.parse()?;
        if out.iter().any(|a| a.name() == spec.name()) {
            return Err(Error::invalid(format!("algorithm '{tag}' listed twice")));
        }
        out.push(spec);
    }
    if out.is_empty() {
        return Err(Error::invalid("empty algorithm list"));
    }
    Ok(out)
}

/// Algorithms × problems × repeats at a fixed budget.
#[derive(Clone)]
pub struct ExperimentPlan {
    pub algorithms: Vec<AlgorithmSpec>,
    pub problems: Vec<Arc<dyn Objective>>,
    pub repeats: usize,
    pub budget: usize,
    /// When false, every record's wall time is written as 0 so that outputs
    /// depend only on the plan and the seed.
    pub record_timing: bool,
}

impl ExperimentPlan {
    pub fn new(
        algorithms: Vec<AlgorithmSpec>,
        problems: Vec<Arc<dyn Objective>>,
        repeats: usize,
        budget: usize,
    ) -> Self {
        Self {
            algorithms,
            problems,
            repeats,
            budget,
            record_timing: false,
        }
    }

    pub fn run_count(&self) -> usize {
        self.algorithms.len() * self.problems.len() * self.repeats
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::invalid("repeats must be at least 1"));
        }
        if self.algorithms.is_empty() || self.problems.is_empty() {
            return Err(Error::invalid("plan needs at least one algorithm and one problem"));
        }
        let mut ids: Vec<&str> = self.problems.iter().map(|p| p.id()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("problem id '{}' appears twice", w[0])));
        }
        for a in &self.algorithms {
            a.validate()?;
            let min = a.build().min_budget();
            if self.budget < min {
                return Err(Error::invalid(format!(
                    "budget {} is below the minimum {min} for {a}",
                    self.budget
                )));
            }
        }
        Ok(())
    }
}

/// Seed of one run, a pure function of the master seed and the run's
/// coordinates.
pub fn run_seed(master_seed: u64, algorithm: &str, problem: &str, repeat: usize) -> u64 {
    derive_seed(master_seed, &format!("run/{algorithm}/{problem}/{repeat}"))
}

/// Executes every run of `plan`. Records come back in canonical order
/// (algorithm, then problem, then repeat, as listed in the plan) whatever
/// the degree of parallelism. `jobs == 0` uses all cores.
pub fn run_experiment(plan: &ExperimentPlan, master_seed: u64, jobs: usize) -> Result<Vec<RunRecord>> {
    plan.validate()?;
    let mut tasks = Vec::with_capacity(plan.run_count());
    for (a, algorithm) in plan.algorithms.iter().enumerate() {
        for (p, problem) in plan.problems.iter().enumerate() {
            for r in 0..plan.repeats {
                tasks.push((a, p, run_seed(master_seed, algorithm.name(), problem.id(), r)));
            }
        }
    }
    let optimizers: Vec<Box<dyn Optimizer>> = plan.algorithms.iter().map(|a| a.build()).collect();
    let run_one = |&(a, p, seed): &(usize, usize, u64)| -> Result<RunRecord> {
        let mut record = execute(optimizers[a].as_ref(), plan.problems[p].as_ref(), plan.budget, seed)?;
        if !plan.record_timing {
            record.wall_time_s = 0.0;
        }
        Ok(record)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidState(format!("cannot start worker pool: {e}")))?;
    pool.install(|| tasks.par_iter().map(run_one).collect())
}
