//! Octopus-inspired optimization: an individual coordinates tentacles, each
//! tentacle runs a swarm of suckers around its own center, and stagnated
//! tentacles are regenerated at random locations.

mod config;
mod engine;
mod moves;
mod state;

pub use config::OioConfig;
pub use engine::{
    check_and_regenerate, initial_radius, initialize, oio_step, optimize, population_diversity,
    regenerate, MoveKind, Oio, OioRun, StepReport, MASTER_PULL_PROBABILITY,
};
pub use moves::{
    compute_energy, exploit_energy_pull, exploit_pso, explore_elite, explore_levy, levy_step,
    mantegna_sigma,
};
pub use state::{
    maintain_elite, update_tentacle_best, EliteEntry, EliteMemory, OctopusState, Role,
    SuckerState, TentacleState,
};
