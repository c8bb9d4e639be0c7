//! The optimizer contract shared by OIO and the baselines.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::objective::{Evaluator, Objective};
use crate::record::RunRecord;

pub trait Optimizer: Send + Sync {
    /// Identifier used in records and output files.
    fn name(&self) -> String;

    /// Smallest budget the optimizer can run with.
    fn min_budget(&self) -> usize;

    /// Minimizes through `evaluator` until its budget is spent or the
    /// optimizer's own termination rule fires. Every random draw must derive
    /// from `seed`.
    fn run(&self, evaluator: &mut Evaluator<'_>, seed: u64) -> Result<()>;
}

/// Runs one optimizer on one objective and packages the result.
///
/// A call past the budget is recorded as a fault on the returned record
/// rather than surfaced as an error.
pub fn execute(
    optimizer: &dyn Optimizer,
    objective: &dyn Objective,
    budget: usize,
    seed: u64,
) -> Result<RunRecord> {
    if budget < optimizer.min_budget() {
        return Err(Error::invalid(format!(
            "budget {budget} is below the minimum {} for {}",
            optimizer.min_budget(),
            optimizer.name()
        )));
    }
    let mut evaluator = Evaluator::new(objective, budget);
    let start = Instant::now();
    match optimizer.run(&mut evaluator, seed) {
        Ok(()) | Err(Error::BudgetExhausted { .. }) => {}
        Err(e) => return Err(e),
    }
    let wall = start.elapsed().as_secs_f64();
    Ok(evaluator.finish(&optimizer.name(), seed, wall))
}
