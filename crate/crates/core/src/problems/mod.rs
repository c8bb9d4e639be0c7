//! Fitness functions: NK landscapes, a continuous test suite, and protein
//! sequence landscapes reached through a softmax encoding.

mod continuous;
mod empirical;
mod nk;
mod protein;
mod transfer;

pub use continuous::{
    continuous_suite, continuous_suite_seeded, BaseFunction, Component, ContinuousFunction,
    SHIFT_BOUND, SUITE_BOUND, SUITE_NAMES, SUITE_SEED,
};
pub use empirical::{
    empirical_fitness, load_empirical, EmpiricalLandscape, Notation, ProteinProblem, TableFormat,
    DEFAULT_UNKNOWN_PENALTY, PROTEIN_BOX,
};
pub use nk::{generate_nk, nk_fitness, NkDocument, NkLandscape, NkProblem, BINARY_BOX, CANONICAL_CONFIGS};
pub use protein::{decode_protein, residue_index, softmax, DecodeMode, ProteinCodec, AMINO_ACIDS};
pub use transfer::binarize_sigmoid;
