//! The objective contract shared by every optimizer, and the budget-enforcing
//! evaluator that wraps it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{RunRecord, TracePoint};
use crate::space::SearchSpace;

/// Natural optimization direction of a problem. Values returned by
/// [`Objective::evaluate`] are always in minimization convention; this only
/// records how to present them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Converts a minimization-convention value back to the natural scale.
    pub fn natural(self, minimized: f64) -> f64 {
        match self {
            Direction::Minimize => minimized,
            Direction::Maximize => -minimized,
        }
    }
}

/// A pure, reentrant fitness oracle over a box-bounded space.
pub trait Objective: Send + Sync {
    fn id(&self) -> &str;

    fn space(&self) -> &SearchSpace;

    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    /// Value to minimize at `x`.
    fn evaluate(&self, x: &[f64]) -> f64;

    /// Genome length when the problem is natively binary. Binary-native
    /// optimizers (hill climbing, annealing, genetic) then work on bit
    /// strings through [`Objective::evaluate_bits`].
    fn bit_length(&self) -> Option<usize> {
        None
    }

    /// Value to minimize for a bit string. The default maps bit 1 to the
    /// upper bound and bit 0 to the lower bound.
    fn evaluate_bits(&self, bits: &[bool]) -> f64 {
        self.evaluate(&bits_to_corners(self.space(), bits))
    }

    /// Best attainable value (minimization convention), when known.
    fn known_optimum(&self) -> Option<f64> {
        None
    }
}

pub(crate) fn bits_to_corners(space: &SearchSpace, bits: &[bool]) -> Vec<f64> {
    bits.iter()
        .enumerate()
        .map(|(d, b)| if *b { space.upper()[d] } else { space.lower()[d] })
        .collect()
}

fn better(a: f64, b: f64) -> bool {
    // NaN never counts as an improvement.
    a < b
}

/// Counting wrapper around an [`Objective`].
///
/// Rejects every call past the budget (and flags the run), tracks the
/// best-so-far value and records the convergence trace: a point at every
/// improvement and at every 1% milestone of the budget.
pub struct Evaluator<'a> {
    objective: &'a dyn Objective,
    budget: usize,
    used: usize,
    best: f64,
    best_position: Vec<f64>,
    trace: Vec<TracePoint>,
    milestone_step: usize,
    next_milestone: usize,
    fault: bool,
    bound_violations: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(objective: &'a dyn Objective, budget: usize) -> Self {
        let milestone_step = (budget / 100).max(1);
        Self {
            objective,
            budget,
            used: 0,
            best: f64::INFINITY,
            best_position: Vec::new(),
            trace: Vec::new(),
            milestone_step,
            next_milestone: milestone_step,
            fault: false,
            bound_violations: 0,
        }
    }

    pub fn objective(&self) -> &'a dyn Objective {
        self.objective
    }

    pub fn space(&self) -> &'a SearchSpace {
        self.objective.space()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.budget
    }

    pub fn best(&self) -> f64 {
        self.best
    }

    pub fn best_position(&self) -> &[f64] {
        &self.best_position
    }

    /// True once any call was rejected for exceeding the budget.
    pub fn faulted(&self) -> bool {
        self.fault
    }

    /// Number of submitted positions that fell outside the search box.
    pub fn bound_violations(&self) -> usize {
        self.bound_violations
    }

    fn admit(&mut self) -> Result<()> {
        if self.used >= self.budget {
            self.fault = true;
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        self.used += 1;
        Ok(())
    }

    fn record(&mut self, value: f64, position: impl FnOnce() -> Vec<f64>) {
        let improved = better(value, self.best);
        if improved {
            self.best = value;
            self.best_position = position();
        }
        let at_milestone = self.used >= self.next_milestone;
        if at_milestone {
            while self.next_milestone <= self.used {
                self.next_milestone += self.milestone_step;
            }
        }
        if (improved || at_milestone) && self.best.is_finite() {
            self.trace.push(TracePoint {
                evaluations: self.used,
                best_so_far: self.best,
            });
        }
    }

    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        self.admit()?;
        if !self.objective.space().contains(x) {
            self.bound_violations += 1;
        }
        let value = self.objective.evaluate(x);
        self.record(value, || x.to_vec());
        Ok(value)
    }

    pub fn evaluate_bits(&mut self, bits: &[bool]) -> Result<f64> {
        self.admit()?;
        let value = self.objective.evaluate_bits(bits);
        let space = self.objective.space();
        self.record(value, || bits_to_corners(space, bits));
        Ok(value)
    }

    /// Closes the run and produces its record. A final trace point is added at
    /// the last evaluation so the trace ends at `evaluations_used`.
    pub fn finish(mut self, algorithm: &str, seed: u64, wall_time_s: f64) -> RunRecord {
        if self.best.is_finite()
            && self.trace.last().map(|p| p.evaluations) != Some(self.used)
        {
            self.trace.push(TracePoint {
                evaluations: self.used,
                best_so_far: self.best,
            });
        }
        RunRecord {
            algorithm: algorithm.to_string(),
            problem: self.objective.id().to_string(),
            seed,
            final_fitness: self.best,
            evaluations: self.used,
            wall_time_s,
            budget_fault: self.fault,
            trace: self.trace,
            best_position: self.best_position,
        }
    }
}
