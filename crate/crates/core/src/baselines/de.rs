//! DE/rand/1/bin with synchronous generational replacement.

use rand::seq::index;
use rand::Rng;

use super::BaselineConfig;
use crate::error::Result;
use crate::objective::Evaluator;

/// Trial vector for `target` from donors `r = [base, a, b]`:
/// `v = x_base + F·(x_a − x_b)`, binomially crossed with the target at rate
/// `cr` (one coordinate always comes from `v`). Draw order: the forced
/// coordinate, then one uniform per coordinate.
pub fn de_trial<R: Rng + ?Sized>(
    population: &[Vec<f64>],
    target: usize,
    r: [usize; 3],
    f: f64,
    cr: f64,
    rng: &mut R,
) -> Vec<f64> {
    let x = &population[target];
    let forced = rng.random_range(0..x.len());
    (0..x.len())
        .map(|j| {
            let take = rng.random::<f64>() < cr || j == forced;
            if take {
                population[r[0]][j] + f * (population[r[1]][j] - population[r[2]][j])
            } else {
                x[j]
            }
        })
        .collect()
}

pub(super) fn run<R: Rng>(cfg: &BaselineConfig, ev: &mut Evaluator<'_>, rng: &mut R) -> Result<()> {
    let space = ev.space();
    let n = cfg.population;
    let mut population: Vec<Vec<f64>> = (0..n).map(|_| space.sample_uniform(rng)).collect();
    let mut fitness = Vec::with_capacity(n);
    for x in &population {
        fitness.push(ev.evaluate(x)?);
    }
    while !ev.is_exhausted() {
        let mut next = population.clone();
        let mut next_fitness = fitness.clone();
        for i in 0..n {
            if ev.is_exhausted() {
                break;
            }
            let picks = index::sample(rng, n - 1, 3);
            let r = [0, 1, 2].map(|k| {
                let p = picks.index(k);
                if p >= i {
                    p + 1
                } else {
                    p
                }
            });
            let mut trial = de_trial(&population, i, r, cfg.scaling_factor, cfg.de_crossover_rate, rng);
            space.clamp_in_place(&mut trial);
            let ft = ev.evaluate(&trial)?;
            if ft <= fitness[i] {
                next[i] = trial;
                next_fitness[i] = ft;
            }
        }
        population = next;
        fitness = next_fitness;
    }
    Ok(())
}
