use std::sync::Mutex;

use rand::Rng;
use rand_distr::StandardNormal;

use octopus_core::oio::{
    check_and_regenerate, explore_elite, explore_levy, initialize, oio_step, optimize,
    population_diversity, EliteMemory, Oio, OctopusState, OioConfig, Role, SuckerState,
    TentacleState,
};
use octopus_core::rng::stream;
use octopus_core::{Evaluator, Objective, SearchSpace};

struct Sphere(SearchSpace);

impl Objective for Sphere {
    fn id(&self) -> &str {
        "sphere"
    }
    fn space(&self) -> &SearchSpace {
        &self.0
    }
    fn evaluate(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }
}

struct Constant(SearchSpace);

impl Objective for Constant {
    fn id(&self) -> &str {
        "constant"
    }
    fn space(&self) -> &SearchSpace {
        &self.0
    }
    fn evaluate(&self, _: &[f64]) -> f64 {
        7.0
    }
}

/// Remembers every evaluated position.
struct Logged<'a> {
    inner: &'a dyn Objective,
    calls: Mutex<Vec<(Vec<f64>, f64)>>,
}

impl Objective for Logged<'_> {
    fn id(&self) -> &str {
        self.inner.id()
    }
    fn space(&self) -> &SearchSpace {
        self.inner.space()
    }
    fn evaluate(&self, x: &[f64]) -> f64 {
        let f = self.inner.evaluate(x);
        self.calls.lock().unwrap().push((x.to_vec(), f));
        f
    }
}

fn cube(d: usize, half: f64) -> SearchSpace {
    SearchSpace::uniform(d, -half, half).unwrap()
}

fn tentacle(positions: Vec<Vec<f64>>) -> TentacleState {
    let d = positions[0].len();
    TentacleState {
        center: vec![0.0; d],
        radius: 1.0,
        role: Role::Slave,
        local_best: vec![0.0; d],
        local_best_fitness: 1.0,
        stagnation: 0,
        suckers: positions.into_iter().map(SuckerState::unevaluated).collect(),
    }
}

fn octopus(tentacles: Vec<TentacleState>) -> OctopusState {
    let d = tentacles[0].center.len();
    OctopusState {
        tentacles,
        global_best: vec![0.0; d],
        global_best_fitness: f64::INFINITY,
        elite: EliteMemory::new(8),
        evaluations_used: 0,
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[test]
fn diversity_extremes() {
    let space = cube(3, 2.0);
    let same = octopus(vec![tentacle(vec![vec![0.5; 3]; 4]), tentacle(vec![vec![0.5; 3]; 3])]);
    assert_eq!(population_diversity(&same, &space).unwrap(), 0.0);

    let corners = octopus(vec![tentacle(vec![vec![-2.0; 3]]), tentacle(vec![vec![2.0; 3]])]);
    assert!((population_diversity(&corners, &space).unwrap() - 1.0).abs() < 1e-12);

    let lonely = octopus(vec![tentacle(vec![vec![0.0; 3]])]);
    assert!(population_diversity(&lonely, &space).is_err());
}

#[test]
fn diversity_matches_pairwise_oracle() {
    let space = SearchSpace::new(vec![-1.0, 0.0, 10.0], vec![3.0, 2.0, 11.0]).unwrap();
    let mut rng = stream(5);
    for _ in 0..20 {
        let tentacles: Vec<_> = (0..3)
            .map(|_| tentacle((0..4).map(|_| space.sample_uniform(&mut rng)).collect()))
            .collect();
        let state = octopus(tentacles);
        let points: Vec<Vec<f64>> = state
            .tentacles
            .iter()
            .flat_map(|t| t.suckers.iter().map(|s| s.position.clone()))
            .collect();
        let mut sum = 0.0;
        let mut pairs = 0.0;
        for a in &points {
            for b in &points {
                if std::ptr::eq(a, b) {
                    continue;
                }
                sum += a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
                pairs += 1.0;
            }
        }
        let diameter = (16.0f64 + 4.0 + 1.0).sqrt();
        let want = sum / pairs / diameter;
        let got = population_diversity(&state, &space).unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn regeneration_waits_until_threshold_is_exceeded() {
    let space = cube(2, 5.0);
    let config = OioConfig::default();
    let mut t = tentacle(vec![vec![1.0, 1.0]; 3]);
    t.stagnation = config.stagnation_threshold;
    let before = t.clone();
    assert!(!check_and_regenerate(&mut t, &space, &config, &mut stream(1)));
    assert_eq!(t, before);

    t.stagnation += 1;
    let mut replay = t.clone();
    assert!(check_and_regenerate(&mut t, &space, &config, &mut stream(1)));
    assert_eq!(t.stagnation, 0);
    assert!(t.suckers.iter().all(|s| s.pending && space.contains(&s.position)));
    assert!(t.suckers.iter().all(|s| s.personal_best_fitness == f64::INFINITY));
    assert!(check_and_regenerate(&mut replay, &space, &config, &mut stream(1)));
    assert_eq!(t, replay);
}

#[test]
fn one_step_costs_one_evaluation_per_sucker() {
    let problem = Sphere(cube(4, 5.0));
    let config = OioConfig::default();
    let mut evaluator = Evaluator::new(&problem, 10_000);
    let mut state = initialize(&mut evaluator, &config, 3).unwrap();
    assert_eq!(evaluator.used(), 200);
    for t in 0..3 {
        let report = oio_step(&mut state, &mut evaluator, t, &config, 3).unwrap();
        assert_eq!(report.evaluations, 200);
        assert_eq!(report.fresh + report.exploration_moves() + report.exploitation_moves(), 200);
    }
    assert_eq!(evaluator.used(), 800);
    assert_eq!(state.evaluations_used, 800);
}

#[test]
fn sphere_improves_by_two_orders() {
    let problem = Sphere(cube(5, 5.0));
    let mut initial = Vec::new();
    let mut last = Vec::new();
    for seed in 0..5 {
        let run = Oio::default().run_traced(&problem, 20_000, seed).unwrap();
        let at_init = run
            .record
            .trace
            .iter()
            .take_while(|p| p.evaluations <= 200)
            .last()
            .unwrap()
            .best_so_far;
        initial.push(at_init);
        last.push(run.record.final_fitness);
    }
    assert!(median(last.clone()) < 1e-2 * median(initial.clone()), "{last:?} vs {initial:?}");
}

#[test]
fn constant_objective_gives_flat_trace() {
    let problem = Constant(cube(3, 1.0));
    let r = optimize(&problem, &OioConfig::default(), 2_000, 4).unwrap();
    assert_eq!(r.final_fitness, 7.0);
    assert!(r.trace.iter().all(|p| p.best_so_far == 7.0));
    assert_eq!(r.evaluations, 2_000);
}

#[test]
fn default_schedule_stops_after_last_iteration() {
    let problem = Sphere(cube(2, 5.0));
    let r = optimize(&problem, &OioConfig::default(), 30_000, 1).unwrap();
    assert_eq!(r.evaluations, 20_200);
    assert!(!r.budget_fault);
}

#[test]
fn elite_holds_best_distinct_evaluations() {
    let sphere = Sphere(cube(3, 5.0));
    let logged = Logged {
        inner: &sphere,
        calls: Mutex::new(Vec::new()),
    };
    let run = Oio::default().run_traced(&logged, 3_000, 11).unwrap();
    let mut calls = logged.calls.into_inner().unwrap();
    assert_eq!(calls.len(), 3_000);
    calls.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut best: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in calls {
        if best.len() == 8 {
            break;
        }
        if !best.iter().any(|b| b.0 == c.0) {
            best.push(c);
        }
    }
    let got: Vec<(Vec<f64>, f64)> = run
        .state
        .elite
        .entries()
        .iter()
        .map(|e| (e.position.clone(), e.fitness))
        .collect();
    assert_eq!(got, best);
}

#[test]
fn elite_noise_is_centered_on_entry() {
    let space = SearchSpace::uniform(1, 0.0, 1.0).unwrap();
    let mut elite = EliteMemory::new(8);
    elite.offer(&[0.5], 0.0);
    let config = OioConfig::default();
    let mut rng = stream(21);
    let samples: Vec<f64> = (0..10_000)
        .map(|_| explore_elite(&elite, &space, &config, &mut rng).unwrap()[0])
        .collect();
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
    assert!((mean - 0.5).abs() < 0.01, "{mean}");
    assert!((var.sqrt() - 0.1).abs() < 0.005, "{}", var.sqrt());
}

#[test]
fn levy_move_matches_independent_sampler() {
    let space = cube(4, 100.0);
    let config = OioConfig::default();
    let current = [1.0, -2.0, 3.0, 0.5];
    let peer = [0.0, 4.0, -1.0, 2.0];
    // Mantegna scale for beta = 1.5.
    let sigma = 0.696_574_502_557_696_7;
    for seed in 0..50 {
        let got = explore_levy(&current, &peer, &space, &config, &mut stream(seed));
        let mut rng = stream(seed);
        let steps: Vec<f64> = (0..4)
            .map(|_| {
                let u: f64 = rng.sample::<f64, _>(StandardNormal) * sigma;
                let v: f64 = rng.sample(StandardNormal);
                u / v.abs().powf(1.0 / 1.5)
            })
            .collect();
        let r: f64 = rng.random();
        for d in 0..4 {
            let want = (peer[d] + 0.01 * steps[d] * (peer[d] - 2.0 * r * current[d])).clamp(-100.0, 100.0);
            assert!((got[d] - want).abs() <= 1e-9 * want.abs().max(1.0), "{seed}/{d}: {} vs {want}", got[d]);
        }
    }
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

    #[test]
    fn budget_is_exact_and_runs_replay(budget in 200usize..3000, seed in proptest::prelude::any::<u64>()) {
        let problem = Sphere(cube(3, 2.0));
        let mut a = optimize(&problem, &OioConfig::default(), budget, seed).unwrap();
        let mut b = optimize(&problem, &OioConfig::default(), budget, seed).unwrap();
        a.wall_time_s = 0.0;
        b.wall_time_s = 0.0;
        proptest::prop_assert_eq!(a.evaluations, budget);
        proptest::prop_assert!(!a.budget_fault);
        proptest::prop_assert!(a.check_trace().is_ok());
        proptest::prop_assert!(problem.0.contains(&a.best_position));
        proptest::prop_assert_eq!(a, b);
    }
}
