//! Single-point searches: hill climbing and simulated annealing share one
//! neighborhood, a single bit flip on binary problems and a Gaussian step on
//! one coordinate otherwise.

use rand::Rng;
use rand_distr::StandardNormal;

use super::BaselineConfig;
use crate::error::Result;
use crate::objective::Evaluator;

#[derive(Debug, Clone, PartialEq)]
enum Point {
    Bits(Vec<bool>),
    Real(Vec<f64>),
}

fn random_point<R: Rng>(ev: &Evaluator<'_>, rng: &mut R) -> Point {
    match ev.objective().bit_length() {
        Some(n) => Point::Bits((0..n).map(|_| rng.random::<bool>()).collect()),
        None => Point::Real(ev.space().sample_uniform(rng)),
    }
}

fn neighbor<R: Rng>(p: &Point, cfg: &BaselineConfig, ev: &Evaluator<'_>, rng: &mut R) -> Point {
    match p {
        Point::Bits(bits) => {
            let mut b = bits.clone();
            let i = rng.random_range(0..b.len());
            b[i] = !b[i];
            Point::Bits(b)
        }
        Point::Real(x) => {
            let space = ev.space();
            let mut y = x.clone();
            let d = rng.random_range(0..y.len());
            let n: f64 = rng.sample(StandardNormal);
            y[d] = (y[d] + n * cfg.local_step_fraction * space.range(d))
                .clamp(space.lower()[d], space.upper()[d]);
            Point::Real(y)
        }
    }
}

fn evaluate(p: &Point, ev: &mut Evaluator<'_>) -> Result<f64> {
    match p {
        Point::Bits(b) => ev.evaluate_bits(b),
        Point::Real(x) => ev.evaluate(x),
    }
}

/// Accepts only strict improvements; no restarts.
pub(super) fn hill_climb<R: Rng>(
    cfg: &BaselineConfig,
    ev: &mut Evaluator<'_>,
    rng: &mut R,
) -> Result<()> {
    let mut current = random_point(ev, rng);
    let mut f = evaluate(&current, ev)?;
    while !ev.is_exhausted() {
        let cand = neighbor(&current, cfg, ev, rng);
        let fc = evaluate(&cand, ev)?;
        if fc < f {
            current = cand;
            f = fc;
        }
    }
    Ok(())
}

/// Geometric cooling, one step per evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealingSchedule {
    pub initial: f64,
    pub cooling: f64,
}

impl AnnealingSchedule {
    /// Temperature after `k` cooling steps: `T0·cooling^k`.
    pub fn temperature(&self, k: usize) -> f64 {
        self.initial * self.cooling.powi(k.min(i32::MAX as usize) as i32)
    }
}

/// Metropolis rule: improvements (and ties) always pass, a worsening `delta`
/// passes iff `u < exp(−delta/T)`.
pub fn metropolis_accept(delta: f64, temperature: f64, u: f64) -> bool {
    if delta <= 0.0 {
        return true;
    }
    if temperature <= 0.0 {
        return false;
    }
    u < (-delta / temperature).exp()
}

pub(super) fn anneal<R: Rng>(cfg: &BaselineConfig, ev: &mut Evaluator<'_>, rng: &mut R) -> Result<()> {
    let mut current = random_point(ev, rng);
    let mut f = evaluate(&current, ev)?;
    let mut temperature = cfg.initial_temperature;
    while !ev.is_exhausted() {
        let cand = neighbor(&current, cfg, ev, rng);
        let fc = evaluate(&cand, ev)?;
        let u: f64 = rng.random();
        if metropolis_accept(fc - f, temperature, u) {
            current = cand;
            f = fc;
        }
        temperature *= cfg.cooling_rate;
    }
    Ok(())
}
