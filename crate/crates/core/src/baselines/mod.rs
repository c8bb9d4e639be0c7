//! Classic comparison optimizers behind the shared [`Optimizer`] contract:
//! hill climbing, simulated annealing, a genetic algorithm, differential
//! evolution and particle swarm optimization.
//!
//! Hill climbing, annealing and the genetic algorithm work directly on bit
//! strings when the objective is natively binary; everything else searches
//! the continuous box.

mod de;
mod ga;
mod local;
mod pso;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::Evaluator;
use crate::optimizer::Optimizer;
use crate::rng::labeled_stream;

pub use de::de_trial;
pub use local::{metropolis_accept, AnnealingSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "HC")]
    HillClimbing,
    #[serde(rename = "SA")]
    SimulatedAnnealing,
    #[serde(rename = "GA")]
    Genetic,
    #[serde(rename = "DE")]
    DifferentialEvolution,
    #[serde(rename = "PSO")]
    ParticleSwarm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::HillClimbing,
        Algorithm::SimulatedAnnealing,
        Algorithm::Genetic,
        Algorithm::DifferentialEvolution,
        Algorithm::ParticleSwarm,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::HillClimbing => "HC",
            Algorithm::SimulatedAnnealing => "SA",
            Algorithm::Genetic => "GA",
            Algorithm::DifferentialEvolution => "DE",
            Algorithm::ParticleSwarm => "PSO",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::invalid(format!("unknown baseline '{s}'; expected one of HC, SA, GA, DE, PSO"))
            })
    }
}

/// Baseline hyperparameters. [`BaselineConfig::new`] gives the standard
/// settings for each algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub algorithm: Algorithm,
    pub population: usize,
    pub initial_temperature: f64,
    pub cooling_rate: f64,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub tournament_size: usize,
    pub scaling_factor: f64,
    pub de_crossover_rate: f64,
    pub inertia: f64,
    pub c1: f64,
    pub c2: f64,
    /// Gaussian step of the continuous hill-climbing/annealing kernel, as a
    /// fraction of the perturbed dimension's range.
    pub local_step_fraction: f64,
    /// Gaussian mutation of the real-coded GA, as a fraction of range.
    pub mutation_sigma_fraction: f64,
}

impl BaselineConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        let population = match algorithm {
            Algorithm::HillClimbing | Algorithm::SimulatedAnnealing => 1,
            Algorithm::Genetic | Algorithm::DifferentialEvolution => 50,
            Algorithm::ParticleSwarm => 30,
        };
        Self {
            algorithm,
            population,
            initial_temperature: 100.0,
            cooling_rate: 0.99,
            crossover_rate: 0.8,
            mutation_rate: 0.01,
            tournament_size: 2,
            scaling_factor: 0.5,
            de_crossover_rate: 0.7,
            inertia: 0.7,
            c1: 2.0,
            c2: 2.0,
            local_step_fraction: 0.05,
            mutation_sigma_fraction: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let min_pop = match self.algorithm {
            Algorithm::HillClimbing | Algorithm::SimulatedAnnealing => 1,
            Algorithm::Genetic | Algorithm::ParticleSwarm => 2,
            Algorithm::DifferentialEvolution => 4,
        };
        if self.population < min_pop {
            return Err(Error::invalid(format!(
                "{} needs a population of at least {min_pop}",
                self.algorithm
            )));
        }
        for (name, v) in [
            ("cooling_rate", self.cooling_rate),
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
            ("de_crossover_rate", self.de_crossover_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1]")));
            }
        }
        if !(self.initial_temperature >= 0.0) {
            return Err(Error::invalid("initial_temperature must be >= 0"));
        }
        if self.tournament_size == 0 {
            return Err(Error::invalid("tournament_size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Baseline {
    pub config: BaselineConfig,
}

impl Baseline {
    pub fn new(config: BaselineConfig) -> Self {
        Self { config }
    }

    pub fn standard(algorithm: Algorithm) -> Self {
        Self::new(BaselineConfig::new(algorithm))
    }
}

impl Optimizer for Baseline {
    fn name(&self) -> String {
        self.config.algorithm.tag().to_string()
    }

    fn min_budget(&self) -> usize {
        self.config.population
    }

    fn run(&self, evaluator: &mut Evaluator<'_>, seed: u64) -> Result<()> {
        self.config.validate()?;
        let cfg = &self.config;
        let mut rng = labeled_stream(seed, &format!("baseline/{}", cfg.algorithm.tag()));
        match cfg.algorithm {
            Algorithm::HillClimbing => local::hill_climb(cfg, evaluator, &mut rng),
            Algorithm::SimulatedAnnealing => local::anneal(cfg, evaluator, &mut rng),
            Algorithm::Genetic => ga::run(cfg, evaluator, &mut rng),
            Algorithm::DifferentialEvolution => de::run(cfg, evaluator, &mut rng),
            Algorithm::ParticleSwarm => pso::run(cfg, evaluator, &mut rng),
        }
    }
}

/// Runs one baseline and returns its record.
pub fn run_baseline(
    config: &BaselineConfig,
    objective: &dyn crate::objective::Objective,
    budget: usize,
    seed: u64,
) -> Result<crate::record::RunRecord> {
    config.validate()?;
    crate::optimizer::execute(&Baseline::new(config.clone()), objective, budget, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_parse_case_insensitively() {
        assert_eq!("pso".parse::<Algorithm>().unwrap(), Algorithm::ParticleSwarm);
        assert_eq!("HC".parse::<Algorithm>().unwrap(), Algorithm::HillClimbing);
        assert!("WOA".parse::<Algorithm>().is_err());
    }

    #[test]
    fn standard_settings() {
        let ga = BaselineConfig::new(Algorithm::Genetic);
        assert_eq!((ga.population, ga.crossover_rate, ga.mutation_rate), (50, 0.8, 0.01));
        let de = BaselineConfig::new(Algorithm::DifferentialEvolution);
        assert_eq!((de.population, de.scaling_factor, de.de_crossover_rate), (50, 0.5, 0.7));
        let pso = BaselineConfig::new(Algorithm::ParticleSwarm);
        assert_eq!((pso.population, pso.inertia, pso.c1, pso.c2), (30, 0.7, 2.0, 2.0));
        let sa = BaselineConfig::new(Algorithm::SimulatedAnnealing);
        assert_eq!((sa.initial_temperature, sa.cooling_rate), (100.0, 0.99));
    }

    #[test]
    fn rejects_out_of_range_rates() {
        let mut c = BaselineConfig::new(Algorithm::Genetic);
        c.crossover_rate = 1.5;
        assert!(c.validate().is_err());
        let mut c = BaselineConfig::new(Algorithm::DifferentialEvolution);
        c.population = 3;
        assert!(c.validate().is_err());
    }
}
