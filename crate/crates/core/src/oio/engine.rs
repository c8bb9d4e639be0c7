//! Initialization, the iteration step and the optimize loop.
//!
//! Within one step every sucker proposes its move from the state left by the
//! previous step, using its own random substream keyed by
//! `(seed, iteration, tentacle, sucker)`. Proposals are then evaluated in
//! tentacle-major order and merged sequentially, so a parallel proposal
//! phase would produce identical results.

use rand::Rng;
use serde::Serialize;

use super::config::OioConfig;
use super::moves::{
    compute_energy, explore_elite, explore_levy, exploit_energy_pull, exploit_pso,
};
use super::state::{EliteMemory, OctopusState, Role, SuckerState, TentacleState};
use crate::error::{Error, Result};
use crate::objective::{Evaluator, Objective};
use crate::optimizer::{execute, Optimizer};
use crate::record::RunRecord;
use crate::rng::{derive_indexed, labeled_stream, stream};
use crate::space::SearchSpace;

/// Probability that a master sucker in the exploitation phase picks the
/// energy pull towards the global best over the three-level PSO update.
pub const MASTER_PULL_PROBABILITY: f64 = 0.75;

const REGENERATION_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MoveKind {
    /// Evaluation of a freshly (re)initialized position.
    Fresh,
    Levy,
    Elite,
    /// Elite move requested while the memory was empty; a Lévy move ran.
    EliteFallback,
    Pso,
    Pull,
}

impl MoveKind {
    pub fn is_exploration(self) -> bool {
        matches!(self, MoveKind::Levy | MoveKind::Elite | MoveKind::EliteFallback)
    }

    pub fn is_exploitation(self) -> bool {
        matches!(self, MoveKind::Pso | MoveKind::Pull)
    }
}

/// Per-step instrumentation.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StepReport {
    pub iteration: usize,
    pub evaluations: usize,
    pub fresh: usize,
    pub levy: usize,
    pub elite: usize,
    pub elite_fallback: usize,
    pub pso: usize,
    pub pull: usize,
    pub diversity: Option<f64>,
    pub diversity_regeneration: Option<usize>,
    pub stagnation_regenerations: Vec<usize>,
    pub exhausted: bool,
}

impl StepReport {
    pub fn exploration_moves(&self) -> usize {
        self.levy + self.elite + self.elite_fallback
    }

    pub fn exploitation_moves(&self) -> usize {
        self.pso + self.pull
    }

    fn count(&mut self, kind: MoveKind) {
        match kind {
            MoveKind::Fresh => self.fresh += 1,
            MoveKind::Levy => self.levy += 1,
            MoveKind::Elite => self.elite += 1,
            MoveKind::EliteFallback => self.elite_fallback += 1,
            MoveKind::Pso => self.pso += 1,
            MoveKind::Pull => self.pull += 1,
        }
    }
}

struct Proposal {
    position: Vec<f64>,
    velocity: Option<Vec<f64>>,
    kind: MoveKind,
}

/// Starting radius of every tentacle: a quarter of the narrowest range.
pub fn initial_radius(space: &SearchSpace) -> f64 {
    0.25 * (0..space.dimension())
        .map(|d| space.range(d))
        .fold(f64::INFINITY, f64::min)
}

fn sample_around<R: Rng + ?Sized>(
    center: &[f64],
    radius: f64,
    space: &SearchSpace,
    rng: &mut R,
) -> Vec<f64> {
    center
        .iter()
        .enumerate()
        .map(|(d, c)| {
            let lo = (c - radius).max(space.lower()[d]);
            let hi = (c + radius).min(space.upper()[d]);
            lo + rng.random::<f64>() * (hi - lo)
        })
        .collect()
}

/// Places a tentacle at a uniformly drawn center with unevaluated suckers
/// spread uniformly over the box `center ± radius` intersected with the
/// bounds.
fn place_tentacle<R: Rng + ?Sized>(
    tentacle: &mut TentacleState,
    space: &SearchSpace,
    rng: &mut R,
) {
    let radius = initial_radius(space);
    tentacle.center = space.sample_uniform(rng);
    tentacle.radius = radius;
    for s in &mut tentacle.suckers {
        *s = SuckerState::unevaluated(sample_around(&tentacle.center, radius, space, rng));
    }
    tentacle.local_best = tentacle.center.clone();
    tentacle.local_best_fitness = f64::INFINITY;
    tentacle.stagnation = 0;
}

/// Unconditionally regenerates a tentacle. Its suckers become pending and
/// its local best is re-seeded by their first evaluations.
pub fn regenerate<R: Rng + ?Sized>(tentacle: &mut TentacleState, space: &SearchSpace, rng: &mut R) {
    place_tentacle(tentacle, space, rng);
}

/// Regenerates the tentacle when its stagnation counter strictly exceeds the
/// threshold. Returns whether it did.
pub fn check_and_regenerate<R: Rng + ?Sized>(
    tentacle: &mut TentacleState,
    space: &SearchSpace,
    config: &OioConfig,
    rng: &mut R,
) -> bool {
    if tentacle.stagnation > config.stagnation_threshold {
        regenerate(tentacle, space, rng);
        true
    } else {
        false
    }
}

/// Mean pairwise Euclidean distance between all sucker positions, divided by
/// the diameter of the search box.
pub fn population_diversity(octopus: &OctopusState, space: &SearchSpace) -> Result<f64> {
    let positions: Vec<&[f64]> = octopus
        .tentacles
        .iter()
        .flat_map(|t| t.suckers.iter().map(|s| s.position.as_slice()))
        .collect();
    let n = positions.len();
    if n < 2 {
        return Err(Error::InvalidState(format!(
            "diversity needs at least 2 suckers, found {n}"
        )));
    }
    let mut total = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            total += positions[a]
                .iter()
                .zip(positions[b])
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    Ok((total / pairs / space.diameter()).min(1.0))
}

/// Builds the initial state and evaluates every sucker once.
pub fn initialize(
    evaluator: &mut Evaluator<'_>,
    config: &OioConfig,
    seed: u64,
) -> Result<OctopusState> {
    config.validate()?;
    let space = evaluator.space();
    let mut rng = labeled_stream(seed, "oio/init");
    let d = space.dimension();
    let blank = TentacleState {
        center: vec![0.0; d],
        radius: 0.0,
        role: Role::Slave,
        local_best: vec![0.0; d],
        local_best_fitness: f64::INFINITY,
        stagnation: 0,
        suckers: vec![SuckerState::unevaluated(vec![0.0; d]); config.suckers_per_tentacle],
    };
    let mut tentacles = vec![blank; config.num_tentacles];
    for t in &mut tentacles {
        place_tentacle(t, space, &mut rng);
    }
    let mut octopus = OctopusState {
        tentacles,
        global_best: space.lower().to_vec(),
        global_best_fitness: f64::INFINITY,
        elite: EliteMemory::new(config.elite_memory_size),
        evaluations_used: 0,
    };
    'outer: for i in 0..octopus.tentacles.len() {
        for j in 0..config.suckers_per_tentacle {
            if evaluator.is_exhausted() {
                break 'outer;
            }
            let sucker = &mut octopus.tentacles[i].suckers[j];
            let f = evaluator.evaluate(&sucker.position)?;
            sucker.observe(f);
            octopus.elite.offer(&sucker.position, f);
        }
    }
    octopus.evaluations_used = evaluator.used();
    for t in &mut octopus.tentacles {
        t.update_best();
        t.stagnation = 0;
    }
    octopus.refresh_global_best();
    octopus.assign_roles(config.num_masters());
    Ok(octopus)
}

fn propose(
    octopus: &OctopusState,
    i: usize,
    j: usize,
    t: usize,
    config: &OioConfig,
    space: &SearchSpace,
    seed: u64,
) -> Result<Proposal> {
    let tentacle = &octopus.tentacles[i];
    let sucker = &tentacle.suckers[j];
    if sucker.pending {
        return Ok(Proposal {
            position: sucker.position.clone(),
            velocity: None,
            kind: MoveKind::Fresh,
        });
    }
    let mut rng = stream(derive_indexed(seed, &[t as u64, i as u64, j as u64]));
    let energy = compute_energy(t, config.iterations_per_tentacle, &mut rng)?;
    let choice: f64 = rng.random();
    let levy = |rng: &mut _| {
        let n = tentacle.suckers.len();
        let peer = if n > 1 {
            let k = rng_index(rng, n - 1);
            if k >= j {
                k + 1
            } else {
                k
            }
        } else {
            j
        };
        explore_levy(
            &sucker.position,
            &tentacle.suckers[peer].position,
            space,
            config,
            rng,
        )
    };
    let proposal = if energy.abs() >= 1.0 {
        if choice < 0.5 {
            Proposal {
                position: levy(&mut rng),
                velocity: None,
                kind: MoveKind::Levy,
            }
        } else {
            match explore_elite(&octopus.elite, space, config, &mut rng) {
                Some(position) => Proposal {
                    position,
                    velocity: None,
                    kind: MoveKind::Elite,
                },
                None => Proposal {
                    position: levy(&mut rng),
                    velocity: None,
                    kind: MoveKind::EliteFallback,
                },
            }
        }
    } else {
        let pull_probability = match tentacle.role {
            Role::Master => MASTER_PULL_PROBABILITY,
            Role::Slave => 0.5,
        };
        if choice < pull_probability {
            Proposal {
                position: exploit_energy_pull(
                    &sucker.position,
                    &octopus.global_best,
                    energy,
                    space,
                ),
                velocity: None,
                kind: MoveKind::Pull,
            }
        } else {
            let (velocity, position) = exploit_pso(
                sucker,
                &tentacle.local_best,
                &octopus.global_best,
                space,
                config,
                &mut rng,
            );
            Proposal {
                position,
                velocity: Some(velocity),
                kind: MoveKind::Pso,
            }
        }
    };
    Ok(proposal)
}

fn rng_index<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    rng.random_range(0..n)
}

/// One iteration over every tentacle and sucker.
///
/// Consumes one evaluation per sucker. When the budget runs out mid-step
/// the remaining suckers keep their state and the report is flagged
/// `exhausted`.
pub fn oio_step(
    octopus: &mut OctopusState,
    evaluator: &mut Evaluator<'_>,
    t: usize,
    config: &OioConfig,
    seed: u64,
) -> Result<StepReport> {
    let space = evaluator.space();
    let mut report = StepReport {
        iteration: t,
        ..Default::default()
    };
    let mut proposals = Vec::with_capacity(octopus.sucker_count());
    for i in 0..octopus.tentacles.len() {
        for j in 0..octopus.tentacles[i].suckers.len() {
            proposals.push((i, j, propose(octopus, i, j, t, config, space, seed)?));
        }
    }

    let before = evaluator.used();
    for (i, j, proposal) in proposals {
        if evaluator.is_exhausted() {
            report.exhausted = true;
            break;
        }
        let f = evaluator.evaluate(&proposal.position)?;
        report.count(proposal.kind);
        let sucker = &mut octopus.tentacles[i].suckers[j];
        if let Some(velocity) = proposal.velocity {
            for d in 0..velocity.len() {
                sucker.velocity[d] = if sucker.position[d] + velocity[d] == proposal.position[d] {
                    velocity[d]
                } else {
                    0.0
                };
            }
        }
        sucker.position = proposal.position;
        sucker.observe(f);
        octopus.elite.offer(&sucker.position, f);
    }
    report.evaluations = evaluator.used() - before;
    octopus.evaluations_used = evaluator.used();
    report.exhausted |= evaluator.is_exhausted();

    for tentacle in &mut octopus.tentacles {
        tentacle.update_best();
    }
    octopus.refresh_global_best();
    octopus.assign_roles(config.num_masters());

    let mut rng = stream(derive_indexed(seed, &[t as u64, REGENERATION_STREAM]));
    if octopus.sucker_count() >= 2 {
        let diversity = population_diversity(octopus, space)?;
        report.diversity = Some(diversity);
        if diversity < config.diversity_threshold {
            let worst_slave = octopus
                .ranking()
                .into_iter()
                .rev()
                .find(|i| octopus.tentacles[*i].role == Role::Slave);
            if let Some(i) = worst_slave {
                regenerate(&mut octopus.tentacles[i], space, &mut rng);
                report.diversity_regeneration = Some(i);
            }
        }
    }
    for (i, tentacle) in octopus.tentacles.iter_mut().enumerate() {
        if check_and_regenerate(tentacle, space, config, &mut rng) {
            report.stagnation_regenerations.push(i);
        }
    }
    Ok(report)
}

/// Full run history: the record, every step report and the final state.
#[derive(Debug, Clone)]
pub struct OioRun {
    pub record: RunRecord,
    pub steps: Vec<StepReport>,
    pub state: OctopusState,
}

/// The octopus optimizer behind the shared [`Optimizer`] contract.
#[derive(Debug, Clone, Default)]
pub struct Oio {
    pub config: OioConfig,
}

impl Oio {
    pub fn new(config: OioConfig) -> Self {
        Self { config }
    }

    fn drive(
        &self,
        evaluator: &mut Evaluator<'_>,
        seed: u64,
        mut on_step: impl FnMut(&OctopusState, StepReport),
    ) -> Result<OctopusState> {
        let mut octopus = initialize(evaluator, &self.config, seed)?;
        let mut t = 0;
        while t < self.config.iterations_per_tentacle && !evaluator.is_exhausted() {
            let report = oio_step(&mut octopus, evaluator, t, &self.config, seed)?;
            on_step(&octopus, report);
            t += 1;
        }
        Ok(octopus)
    }

    /// Runs with per-step instrumentation.
    pub fn run_traced(&self, objective: &dyn Objective, budget: usize, seed: u64) -> Result<OioRun> {
        self.check_budget(budget)?;
        let mut evaluator = Evaluator::new(objective, budget);
        let mut steps = Vec::new();
        let start = std::time::Instant::now();
        let state = self.drive(&mut evaluator, seed, |_, r| steps.push(r))?;
        let record = evaluator.finish(&self.name(), seed, start.elapsed().as_secs_f64());
        Ok(OioRun {
            record,
            steps,
            state,
        })
    }

    fn check_budget(&self, budget: usize) -> Result<()> {
        self.config.validate()?;
        if budget < self.min_budget() {
            return Err(Error::invalid(format!(
                "budget {budget} is smaller than one iteration ({} evaluations)",
                self.min_budget()
            )));
        }
        Ok(())
    }
}

impl Optimizer for Oio {
    fn name(&self) -> String {
        "OIO".to_string()
    }

    fn min_budget(&self) -> usize {
        self.config.evaluations_per_iteration()
    }

    fn run(&self, evaluator: &mut Evaluator<'_>, seed: u64) -> Result<()> {
        self.check_budget(evaluator.budget())?;
        self.drive(evaluator, seed, |_, _| {})?;
        Ok(())
    }
}

/// Minimizes `objective` with OIO under an evaluation budget.
pub fn optimize(
    objective: &dyn Objective,
    config: &OioConfig,
    budget: usize,
    seed: u64,
) -> Result<RunRecord> {
    let oio = Oio::new(config.clone());
    oio.check_budget(budget)?;
    execute(&oio, objective, budget, seed)
}
