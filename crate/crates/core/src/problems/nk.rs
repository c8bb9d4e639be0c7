//! Kauffman NK landscapes with random epistatic neighbors.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::transfer::binarize_sigmoid;
use crate::error::{Error, Result};
use crate::objective::{Direction, Objective};
use crate::rng::labeled_stream;
use crate::space::SearchSpace;

/// Continuous box through which continuous optimizers see binary problems.
pub const BINARY_BOX: (f64, f64) = (-5.0, 5.0);

/// The paper-scale configurations, easiest first, with their labels.
pub const CANONICAL_CONFIGS: [(&str, usize, usize); 5] = [
    ("simple", 20, 2),
    ("moderate", 30, 3),
    ("hard", 50, 4),
    ("very-hard", 70, 4),
    ("complex", 100, 5),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NkLandscape {
    n: usize,
    k: usize,
    seed: u64,
    neighbors: Vec<Vec<usize>>,
    contributions: Vec<Vec<f64>>,
}

/// Exchange document: `n`, `k`, `seed` and optionally the explicit tables.
/// Without tables the landscape is regenerated from the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NkDocument {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbors: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contributions: Option<Vec<Vec<f64>>>,
}

/// Draws neighbor and contribution tables from `seed`. Each locus gets `k`
/// distinct other loci, chosen uniformly without replacement, and
/// `2^(k+1)` contributions uniform on `[0, 1)`.
pub fn generate_nk(n: usize, k: usize, seed: u64) -> Result<NkLandscape> {
    if n == 0 {
        return Err(Error::invalid("NK landscape needs n >= 1"));
    }
    if k >= n {
        return Err(Error::invalid(format!("NK landscape needs k < n, got n={n} k={k}")));
    }
    if k + 1 >= usize::BITS as usize {
        return Err(Error::invalid(format!("k={k} is too large for a contribution table")));
    }
    let mut rng = labeled_stream(seed, "nk");
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            index::sample(&mut rng, n - 1, k)
                .into_iter()
                .map(|o| if o >= i { o + 1 } else { o })
                .collect()
        })
        .collect();
    let width = 1usize << (k + 1);
    let contributions = (0..n)
        .map(|_| (0..width).map(|_| rng.random::<f64>()).collect())
        .collect();
    Ok(NkLandscape {
        n,
        k,
        seed,
        neighbors,
        contributions,
    })
}

impl NkLandscape {
    /// Builds a landscape from explicit tables, validating their shape.
    pub fn from_tables(
        k: usize,
        seed: u64,
        neighbors: Vec<Vec<usize>>,
        contributions: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = neighbors.len();
        if n == 0 || k >= n {
            return Err(Error::invalid(format!("need 0 <= k < n, got n={n} k={k}")));
        }
        if contributions.len() != n {
            return Err(Error::invalid("one contribution row per locus required"));
        }
        for (i, row) in neighbors.iter().enumerate() {
            if row.len() != k {
                return Err(Error::invalid(format!("locus {i}: expected {k} neighbors")));
            }
            let mut seen = vec![false; n];
            for &nb in row {
                if nb >= n || nb == i || seen[nb] {
                    return Err(Error::invalid(format!(
                        "locus {i}: neighbor {nb} is out of range, self or repeated"
                    )));
                }
                seen[nb] = true;
            }
        }
        let width = 1usize << (k + 1);
        for (i, row) in contributions.iter().enumerate() {
            if row.len() != width || row.iter().any(|c| !(0.0..1.0).contains(c)) {
                return Err(Error::invalid(format!(
                    "locus {i}: need {width} contributions in [0, 1)"
                )));
            }
        }
        Ok(Self {
            n,
            k,
            seed,
            neighbors,
            contributions,
        })
    }

    pub fn from_document(doc: &NkDocument) -> Result<Self> {
        match (&doc.neighbors, &doc.contributions) {
            (Some(nb), Some(c)) => {
                let l = Self::from_tables(doc.k, doc.seed, nb.clone(), c.clone())?;
                if l.n != doc.n {
                    return Err(Error::invalid("table size disagrees with n"));
                }
                Ok(l)
            }
            (None, None) => generate_nk(doc.n, doc.k, doc.seed),
            _ => Err(Error::invalid("neighbors and contributions must be given together")),
        }
    }

    pub fn to_document(&self, include_tables: bool) -> NkDocument {
        NkDocument {
            n: self.n,
            k: self.k,
            seed: self.seed,
            neighbors: include_tables.then(|| self.neighbors.clone()),
            contributions: include_tables.then(|| self.contributions.clone()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn neighbors(&self) -> &[Vec<usize>] {
        &self.neighbors
    }

    pub fn contributions(&self) -> &[Vec<f64>] {
        &self.contributions
    }

    /// Table index of locus `i`: its own bit is the most significant, then
    /// its neighbors in table order.
    fn index(&self, i: usize, genome: &[bool]) -> usize {
        self.neighbors[i]
            .iter()
            .fold(usize::from(genome[i]), |acc, nb| (acc << 1) | usize::from(genome[*nb]))
    }

    /// Mean contribution over all loci; lies in `[0, 1)`.
    pub fn fitness(&self, genome: &[bool]) -> Result<f64> {
        if genome.len() != self.n {
            return Err(Error::invalid(format!(
                "genome length {} does not match n={}",
                genome.len(),
                self.n
            )));
        }
        Ok(self.fitness_unchecked(genome))
    }

    pub(crate) fn fitness_unchecked(&self, genome: &[bool]) -> f64 {
        let total: f64 = (0..self.n)
            .map(|i| self.contributions[i][self.index(i, genome)])
            .sum();
        total / self.n as f64
    }
}

/// Functional form of [`NkLandscape::fitness`].
pub fn nk_fitness(landscape: &NkLandscape, genome: &[bool]) -> Result<f64> {
    landscape.fitness(genome)
}

/// An NK landscape as a minimization objective: negated fitness, over the
/// box `[-5, 5]^N` with sigmoid binarization for continuous optimizers.
#[derive(Debug, Clone)]
pub struct NkProblem {
    id: String,
    landscape: NkLandscape,
    space: SearchSpace,
}

impl NkProblem {
    pub fn new(landscape: NkLandscape) -> Self {
        let id = format!("nk-n{}-k{}-s{}", landscape.n, landscape.k, landscape.seed);
        Self::with_id(id, landscape)
    }

    pub fn with_id(id: impl Into<String>, landscape: NkLandscape) -> Self {
        let space = SearchSpace::uniform(landscape.n, BINARY_BOX.0, BINARY_BOX.1)
            .expect("n >= 1 is guaranteed by the landscape");
        Self {
            id: id.into(),
            landscape,
            space,
        }
    }

    pub fn landscape(&self) -> &NkLandscape {
        &self.landscape
    }
}

impl Objective for NkProblem {
    fn id(&self) -> &str {
        &self.id
    }

    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        -self.landscape.fitness_unchecked(&binarize_sigmoid(x))
    }

    fn bit_length(&self) -> Option<usize> {
        Some(self.landscape.n)
    }

    fn evaluate_bits(&self, bits: &[bool]) -> f64 {
        -self.landscape.fitness_unchecked(bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_k_not_below_n() {
        assert!(generate_nk(5, 5, 0).is_err());
        assert!(generate_nk(0, 0, 0).is_err());
        assert!(generate_nk(5, 4, 0).is_ok());
    }

    #[test]
    fn single_locus_table() {
        let l = NkLandscape::from_tables(0, 0, vec![vec![]], vec![vec![0.3, 0.8]]).unwrap();
        assert_eq!(l.fitness(&[false]).unwrap(), 0.3);
        assert_eq!(l.fitness(&[true]).unwrap(), 0.8);
    }

    #[test]
    fn constant_tables_give_constant_fitness() {
        let n = 6;
        let k = 2;
        let nb: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n, (i + 2) % n]).collect();
        let c = vec![vec![0.25; 8]; n];
        let l = NkLandscape::from_tables(k, 0, nb, c).unwrap();
        for g in 0..(1u32 << n) {
            let genome: Vec<bool> = (0..n).map(|b| g >> b & 1 == 1).collect();
            assert!((l.fitness(&genome).unwrap() - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let l = generate_nk(4, 1, 3).unwrap();
        assert!(l.fitness(&[true; 3]).is_err());
    }

    #[test]
    fn neighbor_tables_are_valid() {
        let l = generate_nk(30, 3, 17).unwrap();
        for (i, row) in l.neighbors().iter().enumerate() {
            assert_eq!(row.len(), 3);
            assert!(!row.contains(&i));
            let mut r = row.clone();
            r.sort_unstable();
            r.dedup();
            assert_eq!(r.len(), 3);
        }
        assert!(l.contributions().iter().all(|r| r.len() == 16));
    }

    #[test]
    fn additive_case_optimum_is_per_locus_argmax() {
        let l = generate_nk(10, 0, 4).unwrap();
        let best: Vec<bool> = l.contributions().iter().map(|r| r[1] > r[0]).collect();
        let expected: f64 =
            l.contributions().iter().map(|r| r[0].max(r[1])).sum::<f64>() / 10.0;
        assert!((l.fitness(&best).unwrap() - expected).abs() < 1e-15);
        for g in 0..1024u32 {
            let genome: Vec<bool> = (0..10).map(|b| g >> b & 1 == 1).collect();
            assert!(l.fitness(&genome).unwrap() <= expected + 1e-15);
        }
    }

    #[test]
    fn document_round_trip() {
        let l = generate_nk(12, 2, 99).unwrap();
        let json = serde_json::to_string(&l.to_document(false)).unwrap();
        let doc: NkDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(NkLandscape::from_document(&doc).unwrap(), l);
        let full = l.to_document(true);
        assert_eq!(NkLandscape::from_document(&full).unwrap(), l);
    }

    #[test]
    fn problem_negates_and_binarizes() {
        let l = generate_nk(8, 2, 1).unwrap();
        let p = NkProblem::new(l.clone());
        let x = [1.0, -1.0, 0.0, 2.0, -0.5, 3.0, 4.0, -4.0];
        let bits = binarize_sigmoid(&x);
        assert_eq!(p.evaluate(&x), -l.fitness(&bits).unwrap());
        assert_eq!(p.evaluate_bits(&bits), p.evaluate(&x));
        assert_eq!(p.direction(), Direction::Maximize);
    }
}
