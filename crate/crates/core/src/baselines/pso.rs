//! Global-best particle swarm with inertia.

use rand::Rng;

use super::BaselineConfig;
use crate::error::Result;
use crate::objective::Evaluator;

pub(super) fn run<R: Rng>(cfg: &BaselineConfig, ev: &mut Evaluator<'_>, rng: &mut R) -> Result<()> {
    let space = ev.space();
    let d = space.dimension();
    let mut positions: Vec<Vec<f64>> = (0..cfg.population).map(|_| space.sample_uniform(rng)).collect();
    let mut velocities = vec![vec![0.0; d]; cfg.population];
    let mut best_pos = positions.clone();
    let mut best_fit = Vec::with_capacity(cfg.population);
    for x in &positions {
        best_fit.push(ev.evaluate(x)?);
    }
    let mut g = (0..cfg.population)
        .min_by(|a, b| best_fit[*a].total_cmp(&best_fit[*b]))
        .expect("swarm is non-empty");
    let mut g_pos = best_pos[g].clone();
    let mut g_fit = best_fit[g];

    while !ev.is_exhausted() {
        for i in 0..cfg.population {
            if ev.is_exhausted() {
                break;
            }
            let x = &mut positions[i];
            let v = &mut velocities[i];
            for k in 0..d {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                v[k] = cfg.inertia * v[k]
                    + cfg.c1 * r1 * (best_pos[i][k] - x[k])
                    + cfg.c2 * r2 * (g_pos[k] - x[k]);
                x[k] += v[k];
            }
            space.clamp_with_velocity(x, v);
            let f = ev.evaluate(x)?;
            if f < best_fit[i] {
                best_fit[i] = f;
                best_pos[i].clone_from(x);
                if f < g_fit {
                    g = i;
                    g_fit = f;
                    g_pos.clone_from(&best_pos[g]);
                }
            }
        }
    }
    Ok(())
}
