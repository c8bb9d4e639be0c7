use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyperparameters of the octopus optimizer.
///
/// Defaults: 5 tentacles × 40 suckers × 100 iterations, which is a
/// 20,000-evaluation budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OioConfig {
    pub num_tentacles: usize,
    pub suckers_per_tentacle: usize,
    pub iterations_per_tentacle: usize,
    /// A tentacle regenerates once its stagnation counter exceeds this.
    pub stagnation_threshold: usize,
    pub diversity_threshold: f64,
    pub elite_memory_size: usize,
    /// Lévy step scale.
    pub levy_alpha: f64,
    /// Lévy tail index, in (1, 2].
    pub levy_beta: f64,
    /// Elite-guided noise as a fraction of each dimension's range.
    pub elite_noise_sigma: f64,
    pub inertia: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Fraction of tentacles promoted to master after each iteration.
    pub master_fraction: f64,
}

impl Default for OioConfig {
    fn default() -> Self {
        Self {
            num_tentacles: 5,
            suckers_per_tentacle: 40,
            iterations_per_tentacle: 100,
            stagnation_threshold: 5,
            diversity_threshold: 0.005,
            elite_memory_size: 8,
            levy_alpha: 0.01,
            levy_beta: 1.5,
            elite_noise_sigma: 0.1,
            inertia: 0.7,
            c1: 1.5,
            c2: 1.5,
            c3: 1.5,
            master_fraction: 0.4,
        }
    }
}

impl OioConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("num_tentacles", self.num_tentacles),
            ("suckers_per_tentacle", self.suckers_per_tentacle),
            ("iterations_per_tentacle", self.iterations_per_tentacle),
            ("stagnation_threshold", self.stagnation_threshold),
            ("elite_memory_size", self.elite_memory_size),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::invalid(format!("{name} must be at least 1")));
            }
        }
        if !(self.diversity_threshold >= 0.0) {
            return Err(Error::invalid("diversity_threshold must be >= 0"));
        }
        if !(self.levy_alpha >= 0.0) {
            return Err(Error::invalid("levy_alpha must be >= 0"));
        }
        if !(self.levy_beta > 1.0 && self.levy_beta <= 2.0) {
            return Err(Error::invalid("levy_beta must lie in (1, 2]"));
        }
        if !(self.elite_noise_sigma >= 0.0) {
            return Err(Error::invalid("elite_noise_sigma must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.master_fraction) {
            return Err(Error::invalid("master_fraction must lie in [0, 1]"));
        }
        for (name, v) in [
            ("inertia", self.inertia),
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Objective calls per full iteration: one per sucker.
    pub fn evaluations_per_iteration(&self) -> usize {
        self.num_tentacles * self.suckers_per_tentacle
    }

    pub fn num_masters(&self) -> usize {
        (self.master_fraction * self.num_tentacles as f64).ceil() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_twenty_thousand_evaluation_budget() {
        let c = OioConfig::default();
        c.validate().unwrap();
        assert_eq!(c.evaluations_per_iteration() * c.iterations_per_tentacle, 20_000);
        assert_eq!(c.num_masters(), 2);
    }

    #[test]
    fn rejects_zero_counts_and_bad_beta() {
        let mut c = OioConfig {
            num_tentacles: 0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        c.num_tentacles = 5;
        c.levy_beta = 1.0;
        assert!(c.validate().is_err());
        c.levy_beta = 2.0;
        assert!(c.validate().is_ok());
    }
}
