use serde::{Deserialize, Serialize};

/// One point of a convergence trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluations: usize,
    pub best_so_far: f64,
}

/// Outcome of one optimizer run on one problem.
///
/// Fitness values follow the minimization convention. `trace` has strictly
/// increasing evaluation counts and non-increasing best-so-far values, and
/// its last entry equals `final_fitness` at `evaluations`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub problem: String,
    pub seed: u64,
    pub final_fitness: f64,
    pub evaluations: usize,
    pub wall_time_s: f64,
    #[serde(default)]
    pub budget_fault: bool,
    pub trace: Vec<TracePoint>,
    #[serde(default)]
    pub best_position: Vec<f64>,
}

impl RunRecord {
    /// Checks the trace invariants; returns a description of the first
    /// violation.
    pub fn check_trace(&self) -> Result<(), String> {
        for w in self.trace.windows(2) {
            if w[1].evaluations <= w[0].evaluations {
                return Err(format!(
                    "evaluations not strictly increasing: {} then {}",
                    w[0].evaluations, w[1].evaluations
                ));
            }
            if w[1].best_so_far > w[0].best_so_far {
                return Err(format!(
                    "best-so-far increased from {} to {} at {}",
                    w[0].best_so_far, w[1].best_so_far, w[1].evaluations
                ));
            }
        }
        if let Some(last) = self.trace.last() {
            if last.best_so_far != self.final_fitness {
                return Err("final fitness differs from last trace point".into());
            }
            if last.evaluations != self.evaluations {
                return Err("last trace point is not at the final evaluation count".into());
            }
        }
        Ok(())
    }
}
