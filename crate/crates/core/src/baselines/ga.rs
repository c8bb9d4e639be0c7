//! Generational GA: binary tournament selection, uniform crossover, per-gene
//! mutation and single-individual elitism. Bit strings on binary problems,
//! real vectors with Gaussian mutation otherwise.

use rand::Rng;
use rand_distr::StandardNormal;

use super::BaselineConfig;
use crate::error::Result;
use crate::objective::Evaluator;

#[derive(Debug, Clone)]
enum Genome {
    Bits(Vec<bool>),
    Real(Vec<f64>),
}

fn tournament<R: Rng>(fitness: &[f64], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..fitness.len());
    for _ in 1..size {
        let c = rng.random_range(0..fitness.len());
        if fitness[c] < fitness[best] {
            best = c;
        }
    }
    best
}

fn evaluate(g: &Genome, ev: &mut Evaluator<'_>) -> Result<f64> {
    match g {
        Genome::Bits(b) => ev.evaluate_bits(b),
        Genome::Real(x) => ev.evaluate(x),
    }
}

fn breed<R: Rng>(
    a: &Genome,
    b: &Genome,
    cfg: &BaselineConfig,
    ev: &Evaluator<'_>,
    rng: &mut R,
) -> Genome {
    let cross = rng.random::<f64>() < cfg.crossover_rate;
    match (a, b) {
        (Genome::Bits(a), Genome::Bits(b)) => {
            let child = a
                .iter()
                .zip(b)
                .map(|(x, y)| {
                    let gene = if cross && rng.random::<bool>() { *y } else { *x };
                    if rng.random::<f64>() < cfg.mutation_rate {
                        !gene
                    } else {
                        gene
                    }
                })
                .collect();
            Genome::Bits(child)
        }
        (Genome::Real(a), Genome::Real(b)) => {
            let space = ev.space();
            let child = a
                .iter()
                .zip(b)
                .enumerate()
                .map(|(d, (x, y))| {
                    let mut gene = if cross && rng.random::<bool>() { *y } else { *x };
                    if rng.random::<f64>() < cfg.mutation_rate {
                        let n: f64 = rng.sample(StandardNormal);
                        gene = (gene + n * cfg.mutation_sigma_fraction * space.range(d))
                            .clamp(space.lower()[d], space.upper()[d]);
                    }
                    gene
                })
                .collect();
            Genome::Real(child)
        }
        _ => unreachable!("a population never mixes encodings"),
    }
}

pub(super) fn run<R: Rng>(cfg: &BaselineConfig, ev: &mut Evaluator<'_>, rng: &mut R) -> Result<()> {
    let mut population: Vec<Genome> = (0..cfg.population)
        .map(|_| match ev.objective().bit_length() {
            Some(n) => Genome::Bits((0..n).map(|_| rng.random::<bool>()).collect()),
            None => Genome::Real(ev.space().sample_uniform(rng)),
        })
        .collect();
    let mut fitness = Vec::with_capacity(cfg.population);
    for g in &population {
        fitness.push(evaluate(g, ev)?);
    }
    while !ev.is_exhausted() {
        let elite = (0..fitness.len())
            .min_by(|a, b| fitness[*a].total_cmp(&fitness[*b]))
            .expect("population is non-empty");
        let mut next = vec![population[elite].clone()];
        let mut next_fitness = vec![fitness[elite]];
        while next.len() < cfg.population && !ev.is_exhausted() {
            let a = tournament(&fitness, cfg.tournament_size, rng);
            let b = tournament(&fitness, cfg.tournament_size, rng);
            let child = breed(&population[a], &population[b], cfg, ev, rng);
            next_fitness.push(evaluate(&child, ev)?);
            next.push(child);
        }
        population = next;
        fitness = next_fitness;
    }
    Ok(())
}
