//! Hierarchical octopus-inspired optimization (OIO) with classic baselines,
//! benchmark problems and a reproducible experiment harness.
//!
//! Every optimizer in this crate minimizes. Maximization problems (NK
//! landscapes, protein fitness tables) are negated at the problem layer, so a
//! [`RunRecord`] always reports values in minimization convention.

pub mod baselines;
pub mod error;
pub mod harness;
pub mod objective;
pub mod oio;
pub mod optimizer;
pub mod problems;
pub mod record;
pub mod rng;
pub mod space;

pub use error::{Error, Result};
pub use objective::{Direction, Evaluator, Objective};
pub use optimizer::{execute, Optimizer};
pub use record::{RunRecord, TracePoint};
pub use space::SearchSpace;
