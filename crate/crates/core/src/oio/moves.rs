//! Sucker move operators: the energy factor, the two exploration moves and
//! the two exploitation moves.
//!
//! Random draws happen in a fixed documented order so that any sampler
//! replaying the same stream reproduces a move exactly.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::gamma::gamma;

use super::config::OioConfig;
use super::state::{EliteMemory, SuckerState};
use crate::error::{Error, Result};
use crate::space::SearchSpace;

/// Energy factor `E = 2·E0·(1 − t/t_max)` with `E0 = 2u − 1`, `u ~ U[0,1)`.
/// Consumes one uniform draw.
pub fn compute_energy<R: Rng + ?Sized>(t: usize, t_max: usize, rng: &mut R) -> Result<f64> {
    if t_max == 0 {
        return Err(Error::invalid("t_max must be at least 1"));
    }
    if t > t_max {
        return Err(Error::invalid(format!("iteration {t} beyond t_max {t_max}")));
    }
    let e0 = 2.0 * rng.random::<f64>() - 1.0;
    Ok(energy_from(e0, t, t_max))
}

pub(crate) fn energy_from(e0: f64, t: usize, t_max: usize) -> f64 {
    2.0 * e0 * (1.0 - t as f64 / t_max as f64)
}

/// Scale of the numerator Gaussian in Mantegna's algorithm.
pub fn mantegna_sigma(beta: f64) -> f64 {
    let num = gamma(1.0 + beta) * (PI * beta / 2.0).sin();
    let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

/// One Lévy-stable step by Mantegna's method: `u / |v|^(1/β)` with
/// `u ~ N(0, σ²)` drawn first, then `v ~ N(0, 1)`.
pub fn levy_step<R: Rng + ?Sized>(beta: f64, sigma: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.sample::<f64, _>(StandardNormal) * sigma;
    let v: f64 = rng.sample(StandardNormal);
    u / v.abs().powf(1.0 / beta)
}

/// Lévy-flight move around a random peer:
/// `S_rand + α·Lévy ⊙ (S_rand − 2·r·S)`, clamped.
///
/// Draw order: one Lévy step per dimension, then the scalar `r`.
pub fn explore_levy<R: Rng + ?Sized>(
    current: &[f64],
    peer: &[f64],
    space: &SearchSpace,
    config: &OioConfig,
    rng: &mut R,
) -> Vec<f64> {
    let sigma = mantegna_sigma(config.levy_beta);
    let steps: Vec<f64> = (0..current.len())
        .map(|_| levy_step(config.levy_beta, sigma, rng))
        .collect();
    let r: f64 = rng.random();
    let mut out: Vec<f64> = peer
        .iter()
        .zip(current)
        .zip(&steps)
        .map(|((p, s), l)| p + config.levy_alpha * l * (p - 2.0 * r * s))
        .collect();
    space.clamp_in_place(&mut out);
    out
}

/// Elite-guided move: a uniformly chosen elite entry plus Gaussian noise
/// with per-dimension deviation `σ·(U − L)`, clamped. Returns `None` when the
/// memory is empty so the caller can fall back to a Lévy move.
///
/// Draw order: the entry index, then one normal per dimension.
pub fn explore_elite<R: Rng + ?Sized>(
    elite: &EliteMemory,
    space: &SearchSpace,
    config: &OioConfig,
    rng: &mut R,
) -> Option<Vec<f64>> {
    if elite.is_empty() {
        return None;
    }
    let k = rng.random_range(0..elite.len());
    let base = &elite.entries()[k].position;
    let mut out: Vec<f64> = base
        .iter()
        .enumerate()
        .map(|(d, x)| {
            let n: f64 = rng.sample(StandardNormal);
            x + n * config.elite_noise_sigma * space.range(d)
        })
        .collect();
    space.clamp_in_place(&mut out);
    Some(out)
}

/// Three-level PSO update. Returns the raw new velocity and the clamped new
/// position. Draw order: `r1`, `r2`, `r3` (one scalar each).
pub fn exploit_pso<R: Rng + ?Sized>(
    sucker: &SuckerState,
    tentacle_best: &[f64],
    global_best: &[f64],
    space: &SearchSpace,
    config: &OioConfig,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let r1: f64 = rng.random();
    let r2: f64 = rng.random();
    let r3: f64 = rng.random();
    let s = &sucker.position;
    let velocity: Vec<f64> = (0..s.len())
        .map(|d| {
            config.inertia * sucker.velocity[d]
                + config.c1 * r1 * (sucker.personal_best[d] - s[d])
                + config.c2 * r2 * (tentacle_best[d] - s[d])
                + config.c3 * r3 * (global_best[d] - s[d])
        })
        .collect();
    let mut position: Vec<f64> = s.iter().zip(&velocity).map(|(x, v)| x + v).collect();
    space.clamp_in_place(&mut position);
    (velocity, position)
}

/// Energy-modulated pull: `G − E·|G − S|`, clamped.
pub fn exploit_energy_pull(
    current: &[f64],
    global_best: &[f64],
    energy: f64,
    space: &SearchSpace,
) -> Vec<f64> {
    let mut out: Vec<f64> = global_best
        .iter()
        .zip(current)
        .map(|(g, s)| g - energy * (g - s).abs())
        .collect();
    space.clamp_in_place(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn space(d: usize) -> SearchSpace {
        SearchSpace::uniform(d, -10.0, 10.0).unwrap()
    }

    #[test]
    fn energy_vanishes_at_t_max() {
        let mut rng = stream(3);
        for _ in 0..100 {
            assert_eq!(compute_energy(100, 100, &mut rng).unwrap(), 0.0);
        }
    }

    #[test]
    fn energy_endpoint_and_bound() {
        assert_eq!(energy_from(1.0, 0, 10), 2.0);
        let mut rng = stream(5);
        for t in 0..=50 {
            let e = compute_energy(t, 50, &mut rng).unwrap();
            assert!(e.abs() <= 2.0 * (1.0 - t as f64 / 50.0));
        }
    }

    #[test]
    fn energy_replays_under_seed() {
        let a = compute_energy(50, 100, &mut stream(11)).unwrap();
        let b = compute_energy(50, 100, &mut stream(11)).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn energy_rejects_zero_t_max() {
        assert!(compute_energy(0, 0, &mut stream(0)).is_err());
    }

    #[test]
    fn mantegna_sigma_at_three_halves() {
        // Γ(2.5)·sin(3π/4) / (Γ(1.25)·1.5·2^0.25), raised to 1/1.5
        assert!((mantegna_sigma(1.5) - 0.696_574_502_557_696_7).abs() < 1e-12);
    }

    #[test]
    fn levy_with_zero_alpha_returns_peer() {
        let cfg = OioConfig {
            levy_alpha: 0.0,
            ..Default::default()
        };
        let out = explore_levy(&[1.0, 2.0], &[3.0, -4.0], &space(2), &cfg, &mut stream(1));
        assert_eq!(out, vec![3.0, -4.0]);
        let out = explore_levy(&[1.0, 2.0], &[30.0, -4.0], &space(2), &cfg, &mut stream(1));
        assert_eq!(out, vec![10.0, -4.0]);
    }

    #[test]
    fn levy_at_origin_stays() {
        let out = explore_levy(
            &[0.0; 3],
            &[0.0; 3],
            &space(3),
            &OioConfig::default(),
            &mut stream(2),
        );
        assert_eq!(out, vec![0.0; 3]);
    }

    #[test]
    fn elite_empty_signals_fallback() {
        let e = EliteMemory::new(4);
        assert!(explore_elite(&e, &space(2), &OioConfig::default(), &mut stream(0)).is_none());
    }

    #[test]
    fn elite_zero_noise_is_exact() {
        let mut e = EliteMemory::new(4);
        e.offer(&[1.5, -2.5], 0.0);
        let cfg = OioConfig {
            elite_noise_sigma: 0.0,
            ..Default::default()
        };
        let out = explore_elite(&e, &space(2), &cfg, &mut stream(9)).unwrap();
        assert_eq!(out, vec![1.5, -2.5]);
    }

    fn at(position: Vec<f64>, velocity: Vec<f64>) -> SuckerState {
        SuckerState {
            personal_best: position.clone(),
            position,
            velocity,
            personal_best_fitness: 0.0,
            pending: false,
        }
    }

    #[test]
    fn pso_zero_coefficients_is_stationary() {
        let cfg = OioConfig {
            inertia: 0.0,
            c1: 0.0,
            c2: 0.0,
            c3: 0.0,
            ..Default::default()
        };
        let s = at(vec![1.0, 2.0], vec![3.0, 4.0]);
        let (v, x) = exploit_pso(&s, &[5.0, 5.0], &[-5.0, 5.0], &space(2), &cfg, &mut stream(0));
        assert_eq!(v, vec![0.0, 0.0]);
        assert_eq!(x, vec![1.0, 2.0]);
    }

    #[test]
    fn pso_consensus_is_stationary() {
        let s = at(vec![1.0, 2.0], vec![0.0, 0.0]);
        let (v, x) = exploit_pso(
            &s,
            &[1.0, 2.0],
            &[1.0, 2.0],
            &space(2),
            &OioConfig::default(),
            &mut stream(0),
        );
        assert_eq!(v, vec![0.0, 0.0]);
        assert_eq!(x, vec![1.0, 2.0]);
    }

    #[test]
    fn pso_pure_inertia() {
        let cfg = OioConfig {
            inertia: 1.0,
            c1: 0.0,
            c2: 0.0,
            c3: 0.0,
            ..Default::default()
        };
        let s = at(vec![0.0, 0.0], vec![1.0, 0.0]);
        let (v, x) = exploit_pso(&s, &[0.0, 0.0], &[0.0, 0.0], &space(2), &cfg, &mut stream(0));
        assert_eq!(v, vec![1.0, 0.0]);
        assert_eq!(x, vec![1.0, 0.0]);
    }

    #[test]
    fn pso_velocity_is_unclamped() {
        let cfg = OioConfig {
            inertia: 1.0,
            c1: 0.0,
            c2: 0.0,
            c3: 0.0,
            ..Default::default()
        };
        let s = at(vec![9.0], vec![5.0]);
        let (v, x) = exploit_pso(&s, &[0.0], &[0.0], &space(1), &cfg, &mut stream(0));
        assert_eq!(v, vec![5.0]);
        assert_eq!(x, vec![10.0]);
    }

    #[test]
    fn energy_pull_cases() {
        let sp = space(2);
        assert_eq!(exploit_energy_pull(&[4.0, -3.0], &[1.0, 1.0], 0.0, &sp), vec![1.0, 1.0]);
        assert_eq!(exploit_energy_pull(&[1.0, 1.0], &[1.0, 1.0], 0.7, &sp), vec![1.0, 1.0]);
        assert_eq!(exploit_energy_pull(&[0.0, 3.0], &[1.0, 1.0], 0.5, &sp), vec![0.5, 0.0]);
    }
}
