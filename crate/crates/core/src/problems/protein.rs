//! Softmax matrix encoding of protein sequences.
//!
//! A sequence of length `L` is represented by `L × 20` real preference
//! scores laid out row-major. Each row is softmaxed into a distribution over
//! the canonical amino acids.

use rand::Rng;

use crate::error::{Error, Result};

/// The 20 canonical amino acids in one-letter alphabetical order.
pub const AMINO_ACIDS: [u8; 20] = *b"ACDEFGHIKLMNPQRSTVWY";

pub fn residue_index(residue: u8) -> Option<usize> {
    AMINO_ACIDS.iter().position(|a| *a == residue)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeMode {
    /// Highest-probability residue per row, lowest alphabet index on ties.
    Argmax,
    /// One draw per row from its softmax distribution.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProteinCodec {
    length: usize,
    mode: DecodeMode,
}

/// Numerically stable softmax of one row.
pub fn softmax(row: &[f64]) -> Vec<f64> {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = row.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

impl ProteinCodec {
    pub fn new(length: usize, mode: DecodeMode) -> Result<Self> {
        if length == 0 {
            return Err(Error::invalid("protein length must be at least 1"));
        }
        Ok(Self { length, mode })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn mode(&self) -> DecodeMode {
        self.mode
    }

    /// Width of the internal vector, `L × 20`.
    pub fn internal_len(&self) -> usize {
        self.length * AMINO_ACIDS.len()
    }

    fn check(&self, internal: &[f64]) -> Result<()> {
        if internal.len() != self.internal_len() {
            return Err(Error::invalid(format!(
                "internal vector has length {}, expected {}",
                internal.len(),
                self.internal_len()
            )));
        }
        Ok(())
    }

    /// Row-wise softmax probabilities.
    pub fn probabilities(&self, internal: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check(internal)?;
        Ok(internal.chunks(AMINO_ACIDS.len()).map(softmax).collect())
    }

    /// Argmax decode; needs no randomness.
    pub fn decode_argmax(&self, internal: &[f64]) -> Result<Vec<u8>> {
        self.check(internal)?;
        Ok(self.argmax_unchecked(internal))
    }

    pub(crate) fn argmax_unchecked(&self, internal: &[f64]) -> Vec<u8> {
        internal
            .chunks(AMINO_ACIDS.len())
            .map(|row| {
                // softmax is monotone, so the largest score has the largest probability
                let mut best = 0;
                for (j, v) in row.iter().enumerate() {
                    if *v > row[best] {
                        best = j;
                    }
                }
                AMINO_ACIDS[best]
            })
            .collect()
    }

    /// Decodes according to the codec's mode. Sample mode draws one uniform
    /// per row from `rng`.
    pub fn decode<R: Rng + ?Sized>(&self, internal: &[f64], rng: &mut R) -> Result<Vec<u8>> {
        match self.mode {
            DecodeMode::Argmax => self.decode_argmax(internal),
            DecodeMode::Sample => Ok(self
                .probabilities(internal)?
                .into_iter()
                .map(|p| {
                    let u: f64 = rng.random();
                    let mut acc = 0.0;
                    for (j, pj) in p.iter().enumerate() {
                        acc += pj;
                        if u < acc {
                            return AMINO_ACIDS[j];
                        }
                    }
                    AMINO_ACIDS[p.len() - 1]
                })
                .collect()),
        }
    }

    /// Scores whose argmax decode is `sequence`: `high` on the chosen
    /// residue, `low` elsewhere.
    pub fn encode_one_hot(&self, sequence: &[u8], high: f64, low: f64) -> Result<Vec<f64>> {
        if sequence.len() != self.length {
            return Err(Error::invalid("sequence length does not match codec"));
        }
        let mut out = vec![low; self.internal_len()];
        for (i, r) in sequence.iter().enumerate() {
            let j = residue_index(*r)
                .ok_or_else(|| Error::invalid(format!("'{}' is not a canonical residue", *r as char)))?;
            out[i * AMINO_ACIDS.len() + j] = high;
        }
        Ok(out)
    }
}

/// Free-function form of [`ProteinCodec::decode`].
pub fn decode_protein<R: Rng + ?Sized>(
    codec: &ProteinCodec,
    internal: &[f64],
    rng: &mut R,
) -> Result<Vec<u8>> {
    codec.decode(internal, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;

    #[test]
    fn zero_vector_decodes_to_first_residue() {
        let c = ProteinCodec::new(4, DecodeMode::Argmax).unwrap();
        assert_eq!(c.decode_argmax(&vec![0.0; 80]).unwrap(), b"AAAA".to_vec());
    }

    #[test]
    fn uniform_row_is_one_twentieth() {
        let p = softmax(&[0.0; 20]);
        assert!(p.iter().all(|v| (v - 0.05).abs() < 1e-15));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn saturated_row_always_sampled() {
        let c = ProteinCodec::new(1, DecodeMode::Sample).unwrap();
        let mut row = vec![0.0; 20];
        row[7] = 100.0;
        assert!(softmax(&row)[7] > 1.0 - 1e-12);
        let mut rng = stream(8);
        for _ in 0..1000 {
            assert_eq!(c.decode(&row, &mut rng).unwrap(), vec![AMINO_ACIDS[7]]);
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        let c = ProteinCodec::new(2, DecodeMode::Argmax).unwrap();
        assert!(c.decode_argmax(&[0.0; 39]).is_err());
    }

    #[test]
    fn one_hot_round_trip() {
        let c = ProteinCodec::new(5, DecodeMode::Argmax).unwrap();
        let x = c.encode_one_hot(b"MKWVY", 1.0, -1.0).unwrap();
        assert_eq!(c.decode_argmax(&x).unwrap(), b"MKWVY".to_vec());
    }

    proptest! {
        #[test]
        fn rows_sum_to_one(row in prop::collection::vec(-50.0f64..50.0, 20)) {
            let p = softmax(&row);
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }

        #[test]
        fn argmax_invariant_under_row_offset(
            steps in prop::collection::vec(-40i32..40, 20),
            shift in -80i32..80,
        ) {
            // eighths keep every sum exact
            let row: Vec<f64> = steps.iter().map(|s| f64::from(*s) / 8.0).collect();
            let shift = f64::from(shift) / 8.0;
            let c = ProteinCodec::new(1, DecodeMode::Argmax).unwrap();
            let moved: Vec<f64> = row.iter().map(|v| v + shift).collect();
            prop_assert_eq!(c.decode_argmax(&row).unwrap(), c.decode_argmax(&moved).unwrap());
        }
    }
}
