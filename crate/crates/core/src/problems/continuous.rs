//! Continuous test functions in the style of the CEC 2022 suite: unimodal,
//! basic multimodal and composition families over `[-100, 100]^D`, each
//! shifted by a seeded vector and offset by a fixed bias.

use std::f64::consts::{E, PI};

use rand::Rng;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::rng::labeled_stream;
use crate::space::SearchSpace;

pub const SUITE_BOUND: f64 = 100.0;
pub const SHIFT_BOUND: f64 = 80.0;
/// Seed of the fixed shift vectors used by [`continuous_suite`].
pub const SUITE_SEED: u64 = 2022;

pub const SUITE_NAMES: [&str; 10] = [
    "sphere",
    "zakharov",
    "rosenbrock",
    "rastrigin",
    "ackley",
    "levy",
    "griewank",
    "schaffer-f7",
    "composition-1",
    "composition-2",
];

/// Textbook (unshifted) base functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseFunction {
    Sphere,
    Zakharov,
    Rosenbrock,
    Rastrigin,
    Ackley,
    Levy,
    Griewank,
    SchafferF7,
}

impl BaseFunction {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sphere" => Self::Sphere,
            "zakharov" => Self::Zakharov,
            "rosenbrock" => Self::Rosenbrock,
            "rastrigin" => Self::Rastrigin,
            "ackley" => Self::Ackley,
            "levy" => Self::Levy,
            "griewank" => Self::Griewank,
            "schaffer-f7" => Self::SchafferF7,
            _ => return None,
        })
    }

    /// Location of the global minimum (value 0) of the unshifted function.
    pub fn minimizer(self, dimension: usize) -> Vec<f64> {
        match self {
            Self::Rosenbrock | Self::Levy => vec![1.0; dimension],
            _ => vec![0.0; dimension],
        }
    }

    pub fn evaluate(self, x: &[f64]) -> f64 {
        let d = x.len() as f64;
        match self {
            Self::Sphere => x.iter().map(|v| v * v).sum(),
            Self::Zakharov => {
                let sq: f64 = x.iter().map(|v| v * v).sum();
                let lin: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
                    .sum();
                sq + lin.powi(2) + lin.powi(4)
            }
            Self::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            Self::Rastrigin => x
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            Self::Ackley => {
                let sq = x.iter().map(|v| v * v).sum::<f64>() / d;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            Self::Levy => {
                let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
                let last = w[w.len() - 1];
                let mid: f64 = w[..w.len() - 1]
                    .iter()
                    .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
                    .sum();
                (PI * w[0]).sin().powi(2)
                    + mid
                    + (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2))
            }
            Self::Griewank => {
                let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum - prod + 1.0
            }
            Self::SchafferF7 => {
                let s: Vec<f64> = if x.len() == 1 {
                    vec![x[0].abs()]
                } else {
                    x.windows(2).map(|w| w[0].hypot(w[1])).collect()
                };
                let mean = s
                    .iter()
                    .map(|si| si.sqrt() * (1.0 + (50.0 * si.powf(0.2)).sin().powi(2)))
                    .sum::<f64>()
                    / s.len() as f64;
                mean * mean
            }
        }
    }
}

/// One term of a composition function.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub base: BaseFunction,
    pub shift: Vec<f64>,
    pub sigma: f64,
    pub lambda: f64,
    pub bias: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Form {
    Shifted { base: BaseFunction, shift: Vec<f64> },
    Composition(Vec<Component>),
}

/// A shifted test function or composition over `[-100, 100]^D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousFunction {
    id: String,
    space: SearchSpace,
    form: Form,
    bias: f64,
}

fn draw_shift(dimension: usize, seed: u64, label: &str) -> Vec<f64> {
    let mut rng = labeled_stream(seed, label);
    (0..dimension)
        .map(|_| -SHIFT_BOUND + rng.random::<f64>() * 2.0 * SHIFT_BOUND)
        .collect()
}

fn suite_space(dimension: usize) -> Result<SearchSpace> {
    SearchSpace::uniform(dimension, -SUITE_BOUND, SUITE_BOUND)
}

impl ContinuousFunction {
    /// `f(x) = base(x − shift) + bias`.
    pub fn shifted(base: BaseFunction, shift: Vec<f64>, bias: f64) -> Result<Self> {
        let space = suite_space(shift.len())?;
        Ok(Self {
            id: format!("{base:?}").to_lowercase(),
            space,
            form: Form::Shifted { base, shift },
            bias,
        })
    }

    /// Composition `Σ wᵢ·(λᵢ·gᵢ(x − oᵢ) + biasᵢ) + bias` where the weights
    /// `wᵢ ∝ exp(−‖x − pᵢ‖² / (2Dσᵢ²)) / ‖x − pᵢ‖` are normalized and `pᵢ` is
    /// the minimizer of component `i`.
    pub fn composition(components: Vec<Component>, bias: f64) -> Result<Self> {
        let d = components
            .first()
            .map(|c| c.shift.len())
            .ok_or_else(|| Error::invalid("composition needs at least one component"))?;
        if components.iter().any(|c| c.shift.len() != d) {
            return Err(Error::invalid("composition components differ in dimension"));
        }
        Ok(Self {
            id: "composition".into(),
            space: suite_space(d)?,
            form: Form::Composition(components),
            bias,
        })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    /// Location of the global minimum, whose value is [`Self::bias`].
    pub fn minimizer(&self) -> Vec<f64> {
        match &self.form {
            Form::Shifted { base, shift } => shift
                .iter()
                .zip(base.minimizer(shift.len()))
                .map(|(o, m)| o + m)
                .collect(),
            Form::Composition(cs) => component_minimizer(&cs[0]),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.form {
            Form::Shifted { base, shift } => {
                let z: Vec<f64> = x.iter().zip(shift).map(|(a, o)| a - o).collect();
                base.evaluate(&z) + self.bias
            }
            Form::Composition(cs) => composition_value(cs, x) + self.bias,
        }
    }
}

fn component_minimizer(c: &Component) -> Vec<f64> {
    c.shift
        .iter()
        .zip(c.base.minimizer(c.shift.len()))
        .map(|(o, m)| o + m)
        .collect()
}

fn composition_value(components: &[Component], x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let mut weights = Vec::with_capacity(components.len());
    let mut values = Vec::with_capacity(components.len());
    for c in components {
        let dist2: f64 = x
            .iter()
            .zip(component_minimizer(c))
            .map(|(a, p)| (a - p).powi(2))
            .sum();
        let z: Vec<f64> = x.iter().zip(&c.shift).map(|(a, o)| a - o).collect();
        values.push(c.lambda * c.base.evaluate(&z) + c.bias);
        weights.push(if dist2 == 0.0 {
            f64::INFINITY
        } else {
            (-dist2 / (2.0 * d * c.sigma * c.sigma)).exp() / dist2.sqrt()
        });
    }
    if let Some(hit) = weights.iter().position(|w| w.is_infinite()) {
        return values[hit];
    }
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return values.iter().sum::<f64>() / values.len() as f64;
    }
    weights
        .iter()
        .zip(&values)
        .map(|(w, v)| w / total * v)
        .sum()
}

impl Objective for ContinuousFunction {
    fn id(&self) -> &str {
        &self.id
    }

    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.value(x)
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(self.bias)
    }
}

fn suite_bias(name: &str) -> f64 {
    match name {
        "sphere" => 100.0,
        "zakharov" => 300.0,
        "rosenbrock" => 400.0,
        "schaffer-f7" => 600.0,
        "rastrigin" => 800.0,
        "levy" => 900.0,
        "ackley" => 1000.0,
        "griewank" => 1100.0,
        "composition-1" => 2300.0,
        "composition-2" => 2400.0,
        _ => 0.0,
    }
}

/// A suite member with the fixed suite shifts.
pub fn continuous_suite(name: &str, dimension: usize) -> Result<ContinuousFunction> {
    continuous_suite_seeded(name, dimension, SUITE_SEED)
}

/// A suite member with shifts drawn from `seed`.
pub fn continuous_suite_seeded(
    name: &str,
    dimension: usize,
    seed: u64,
) -> Result<ContinuousFunction> {
    if dimension == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let bias = suite_bias(name);
    let f = if let Some(base) = BaseFunction::from_name(name) {
        ContinuousFunction::shifted(base, draw_shift(dimension, seed, name), bias)?
    } else {
        let parts: &[(BaseFunction, f64, f64, f64)] = match name {
            "composition-1" => &[
                (BaseFunction::Rosenbrock, 10.0, 1.0, 0.0),
                (BaseFunction::Sphere, 20.0, 1e-6, 200.0),
                (BaseFunction::Griewank, 30.0, 1.0, 100.0),
            ],
            "composition-2" => &[
                (BaseFunction::Rastrigin, 20.0, 1.0, 0.0),
                (BaseFunction::Ackley, 10.0, 10.0, 100.0),
                (BaseFunction::Griewank, 30.0, 1.0, 200.0),
            ],
            _ => {
                return Err(Error::invalid(format!(
                    "unknown function '{name}'; expected one of {}",
                    SUITE_NAMES.join(", ")
                )))
            }
        };
        let components = parts
            .iter()
            .enumerate()
            .map(|(i, (base, sigma, lambda, cbias))| Component {
                base: *base,
                shift: draw_shift(dimension, seed, &format!("{name}/{i}")),
                sigma: *sigma,
                lambda: *lambda,
                bias: *cbias,
            })
            .collect();
        ContinuousFunction::composition(components, bias)?
    };
    Ok(f.with_id(name))
}
