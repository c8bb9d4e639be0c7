//! Tabular sequence-fitness landscapes (deep-mutational-scanning style) with
//! an additive single-mutant fallback for sequences outside the table.
//!
//! Table format: tab-separated, one header line, then one record per line.
//! The first column holds either a full sequence or a colon-separated list
//! of substitutions such as `A42G` (1-based positions) relative to the wild
//! type; `WT` or an empty field denotes the wild type itself. The second
//! column holds the fitness. Blank lines are skipped, as are lines starting
//! with `#`, except that `# wild_type: <SEQ>` declares the wild type.

use std::collections::BTreeMap;
use std::io::BufRead;

use super::protein::{residue_index, ProteinCodec};
use crate::error::{Error, Result};
use crate::objective::{Direction, Objective};
use crate::space::SearchSpace;

pub const DEFAULT_UNKNOWN_PENALTY: f64 = -0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notation {
    Sequence,
    Mutations,
}

/// How to read a table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableFormat {
    /// `None` infers the notation from the first header column
    /// (`sequence`/`seq` versus `mutations`/`mutant`/`variant`).
    pub notation: Option<Notation>,
    pub wild_type: Option<String>,
    pub unknown_penalty: f64,
}

impl Default for TableFormat {
    fn default() -> Self {
        Self {
            notation: None,
            wild_type: None,
            unknown_penalty: DEFAULT_UNKNOWN_PENALTY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalLandscape {
    wild_type: Vec<u8>,
    wild_type_fitness: f64,
    records: BTreeMap<Vec<u8>, f64>,
    /// Keyed by (1-based position, residue).
    single_effects: BTreeMap<(usize, u8), f64>,
    unknown_penalty: f64,
}

fn check_residues(seq: &[u8]) -> std::result::Result<(), String> {
    match seq.iter().find(|r| residue_index(**r).is_none()) {
        Some(r) => Err(format!("'{}' is not a canonical amino acid", *r as char)),
        None => Ok(()),
    }
}

impl EmpiricalLandscape {
    /// Builds a landscape from full-sequence records. The wild type must be
    /// among them.
    pub fn from_records(
        wild_type: &[u8],
        records: impl IntoIterator<Item = (Vec<u8>, f64)>,
        unknown_penalty: f64,
    ) -> Result<Self> {
        check_residues(wild_type).map_err(Error::invalid)?;
        let mut table = BTreeMap::new();
        for (seq, f) in records {
            if seq.len() != wild_type.len() {
                return Err(Error::invalid("record length differs from the wild type"));
            }
            check_residues(&seq).map_err(Error::invalid)?;
            if table.insert(seq, f).is_some() {
                return Err(Error::invalid("duplicate sequence record"));
            }
        }
        Self::build(wild_type.to_vec(), table, unknown_penalty).map_err(Error::invalid)
    }

    fn build(
        wild_type: Vec<u8>,
        records: BTreeMap<Vec<u8>, f64>,
        unknown_penalty: f64,
    ) -> std::result::Result<Self, String> {
        let wild_type_fitness = *records
            .get(&wild_type)
            .ok_or("no record for the wild type")?;
        let mut single_effects = BTreeMap::new();
        for (seq, f) in &records {
            let mut diffs = seq
                .iter()
                .zip(&wild_type)
                .enumerate()
                .filter(|(_, (a, b))| a != b);
            if let (Some((i, (r, _))), None) = (diffs.next(), diffs.next()) {
                single_effects.insert((i + 1, *r), f - wild_type_fitness);
            }
        }
        Ok(Self {
            wild_type,
            wild_type_fitness,
            records,
            single_effects,
            unknown_penalty,
        })
    }

    pub fn wild_type(&self) -> &[u8] {
        &self.wild_type
    }

    pub fn wild_type_fitness(&self) -> f64 {
        self.wild_type_fitness
    }

    pub fn len(&self) -> usize {
        self.wild_type.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wild_type.is_empty()
    }

    pub fn records(&self) -> &BTreeMap<Vec<u8>, f64> {
        &self.records
    }

    pub fn lookup(&self, sequence: &[u8]) -> Option<f64> {
        self.records.get(sequence).copied()
    }

    /// Additive effect of substituting `residue` at 1-based `position`.
    pub fn single_effect(&self, position: usize, residue: u8) -> Option<f64> {
        self.single_effects.get(&(position, residue)).copied()
    }

    pub fn single_effects(&self) -> &BTreeMap<(usize, u8), f64> {
        &self.single_effects
    }

    pub fn unknown_penalty(&self) -> f64 {
        self.unknown_penalty
    }

    /// Wild-type fitness plus the summed effects of every substitution;
    /// substitutions without a recorded effect add the unknown penalty.
    /// Recorded single mutants and the wild type come back exactly as
    /// stored.
    pub fn additive_prediction(&self, sequence: &[u8]) -> f64 {
        let mut substitutions = sequence
            .iter()
            .zip(&self.wild_type)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, (r, _))| (i + 1, *r))
            .peekable();
        let first = match substitutions.next() {
            None => return self.wild_type_fitness,
            Some(first) => first,
        };
        if substitutions.peek().is_none() && self.single_effects.contains_key(&first) {
            return self.records[sequence];
        }
        self.wild_type_fitness
            + std::iter::once(first)
                .chain(substitutions)
                .map(|key| self.single_effects.get(&key).copied().unwrap_or(self.unknown_penalty))
                .sum::<f64>()
    }

    /// Exact table value when present, otherwise the additive prediction.
    pub fn fitness(&self, sequence: &[u8]) -> Result<f64> {
        if sequence.len() != self.wild_type.len() {
            return Err(Error::invalid(format!(
                "sequence length {} does not match wild type length {}",
                sequence.len(),
                self.wild_type.len()
            )));
        }
        Ok(self.fitness_unchecked(sequence))
    }

    fn fitness_unchecked(&self, sequence: &[u8]) -> f64 {
        self.lookup(sequence)
            .unwrap_or_else(|| self.additive_prediction(sequence))
    }
}

/// Functional form of [`EmpiricalLandscape::fitness`].
pub fn empirical_fitness(landscape: &EmpiricalLandscape, sequence: &[u8]) -> Result<f64> {
    landscape.fitness(sequence)
}

fn apply_mutations(wild_type: &[u8], token: &str) -> std::result::Result<Vec<u8>, String> {
    let mut seq = wild_type.to_vec();
    let mut touched = vec![false; seq.len()];
    for m in token.split(':').map(str::trim) {
        let bytes = m.as_bytes();
        if bytes.len() < 3 {
            return Err(format!("malformed substitution '{m}'"));
        }
        let from = bytes[0];
        let to = bytes[bytes.len() - 1];
        let pos: usize = m[1..m.len() - 1]
            .parse()
            .map_err(|_| format!("malformed position in '{m}'"))?;
        if pos == 0 || pos > seq.len() {
            return Err(format!("position {pos} outside 1..={}", seq.len()));
        }
        if wild_type[pos - 1] != from {
            return Err(format!(
                "'{m}' expects {} at position {pos} but the wild type has {}",
                from as char,
                wild_type[pos - 1] as char
            ));
        }
        if residue_index(to).is_none() {
            return Err(format!("'{}' is not a canonical amino acid", to as char));
        }
        if touched[pos - 1] {
            return Err(format!("position {pos} substituted twice"));
        }
        touched[pos - 1] = true;
        seq[pos - 1] = to;
    }
    Ok(seq)
}

fn is_wild_type_token(token: &str) -> bool {
    token.is_empty() || token.eq_ignore_ascii_case("wt") || token.eq_ignore_ascii_case("_wt")
}

/// Reads a fitness table. Errors carry the 1-based line number.
pub fn load_empirical<R: BufRead>(reader: R, format: &TableFormat) -> Result<EmpiricalLandscape> {
    let mut wild_type: Option<Vec<u8>> = format.wild_type.as_ref().map(|w| w.trim().as_bytes().to_vec());
    let mut notation = format.notation;
    let mut header_seen = false;
    let mut raw: Vec<(usize, String, f64)> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line.map_err(|e| Error::format(line_no, format!("read failed: {e}")))?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.trim_start().strip_prefix('#') {
            if let Some(wt) = comment.trim().strip_prefix("wild_type:") {
                if wild_type.is_none() {
                    wild_type = Some(wt.trim().as_bytes().to_vec());
                }
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() < 2 {
            return Err(Error::format(line_no, "expected two tab-separated columns"));
        }
        if !header_seen {
            header_seen = true;
            if notation.is_none() {
                let col = fields[0].trim().to_ascii_lowercase();
                notation = match col.as_str() {
                    "sequence" | "seq" => Some(Notation::Sequence),
                    "mutations" | "mutation" | "mutant" | "variant" => Some(Notation::Mutations),
                    other => {
                        return Err(Error::format(
                            line_no,
                            format!("cannot infer notation from header column '{other}'"),
                        ))
                    }
                };
            }
            continue;
        }
        let fitness: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::format(line_no, format!("non-numeric fitness '{}'", fields[1].trim())))?;
        if !fitness.is_finite() {
            return Err(Error::format(line_no, "fitness must be finite"));
        }
        raw.push((line_no, fields[0].trim().to_string(), fitness));
    }
    if !header_seen {
        return Err(Error::format(last_line.max(1), "missing header line"));
    }
    let notation = notation.expect("set when the header is read");

    let wild_type = match (wild_type, notation) {
        (Some(w), _) => w,
        (None, Notation::Mutations) => {
            return Err(Error::format(
                raw.first().map_or(1, |r| r.0),
                "mutation notation requires a declared wild type",
            ))
        }
        (None, Notation::Sequence) => match raw.first() {
            Some((_, s, _)) => s.as_bytes().to_vec(),
            None => return Err(Error::format(last_line, "table has no records")),
        },
    };
    check_residues(&wild_type).map_err(|m| Error::format(0, format!("wild type: {m}")))?;

    let mut records = BTreeMap::new();
    for (line_no, token, fitness) in raw {
        let seq = match notation {
            Notation::Sequence => {
                let s = token.as_bytes().to_vec();
                if s.len() != wild_type.len() {
                    return Err(Error::format(
                        line_no,
                        format!("sequence length {} differs from wild type length {}", s.len(), wild_type.len()),
                    ));
                }
                check_residues(&s).map_err(|m| Error::format(line_no, m))?;
                s
            }
            Notation::Mutations if is_wild_type_token(&token) => wild_type.clone(),
            Notation::Mutations => {
                apply_mutations(&wild_type, &token).map_err(|m| Error::format(line_no, m))?
            }
        };
        if records.insert(seq, fitness).is_some() {
            return Err(Error::format(line_no, format!("duplicate record '{token}'")));
        }
    }
    EmpiricalLandscape::build(wild_type, records, format.unknown_penalty)
        .map_err(|m| Error::format(last_line, m))
}

/// An empirical landscape searched through the softmax codec: negated
/// fitness of the argmax decode over `[-5, 5]^(L×20)`.
#[derive(Debug, Clone)]
pub struct ProteinProblem {
    id: String,
    landscape: EmpiricalLandscape,
    codec: ProteinCodec,
    space: SearchSpace,
}

pub const PROTEIN_BOX: (f64, f64) = (-5.0, 5.0);

impl ProteinProblem {
    pub fn new(id: impl Into<String>, landscape: EmpiricalLandscape) -> Result<Self> {
        let codec = ProteinCodec::new(landscape.len(), super::protein::DecodeMode::Argmax)?;
        let space = SearchSpace::uniform(codec.internal_len(), PROTEIN_BOX.0, PROTEIN_BOX.1)?;
        Ok(Self {
            id: id.into(),
            landscape,
            codec,
            space,
        })
    }

    pub fn landscape(&self) -> &EmpiricalLandscape {
        &self.landscape
    }

    pub fn codec(&self) -> &ProteinCodec {
        &self.codec
    }

    pub fn decode(&self, internal: &[f64]) -> Result<Vec<u8>> {
        self.codec.decode_argmax(internal)
    }
}

impl Objective for ProteinProblem {
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
        -self
            .landscape
            .fitness_unchecked(&self.codec.argmax_unchecked(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, wt: Option<&str>) -> Result<EmpiricalLandscape> {
        load_empirical(
            text.as_bytes(),
            &TableFormat {
                wild_type: wt.map(String::from),
                ..Default::default()
            },
        )
    }

    #[test]
    fn wild_type_only() {
        let l = load("mutations\tfitness\nWT\t3.7\n", Some("ACD")).unwrap();
        assert_eq!(l.fitness(b"ACD").unwrap(), 3.7);
    }

    #[test]
    fn single_mutant_effect() {
        let l = load("mutations\tfitness\nWT\t3.0\nA1G\t3.5\n", Some("ACD")).unwrap();
        assert!((l.single_effect(1, b'G').unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn additive_model_returns_stored_singles_exactly() {
        let l = load("mutations\tfitness\nWT\t0.2\nA1G\t0.9\nC2T\t0.3\n", Some("ACD")).unwrap();
        assert_eq!(l.additive_prediction(b"GCD"), 0.9);
        assert_eq!(l.additive_prediction(b"ATD"), 0.3);
        assert_eq!(l.additive_prediction(b"ACD"), 0.2);
        assert_ne!(0.2 + (0.9 - 0.2), 0.9);
    }

    #[test]
    fn double_mutant_additive_fallback() {
        let l = load(
            "mutations\tfitness\nWT\t3.0\nA1G\t3.5\nC2T\t2.8\n",
            Some("ACD"),
        )
        .unwrap();
        let predicted = l.fitness(b"GTD").unwrap();
        assert!((predicted - 3.3).abs() < 1e-12, "{predicted}");
    }

    #[test]
    fn exact_record_takes_precedence() {
        let l = load(
            "mutations\tfitness\nWT\t3.0\nA1G\t3.5\nC2T\t2.8\nA1G:C2T\t9.0\n",
            Some("ACD"),
        )
        .unwrap();
        assert_eq!(l.fitness(b"GTD").unwrap(), 9.0);
    }

    #[test]
    fn unknown_substitution_penalized() {
        let l = load("mutations\tfitness\nWT\t1.0\n", Some("ACD")).unwrap();
        assert!((l.fitness(b"AWY").unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn missing_wild_type_with_mutation_notation() {
        let err = load("mutations\tfitness\nA1G\t1.0\n", None).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
    }

    #[test]
    fn non_numeric_fitness_reports_line() {
        let err = load("sequence\tfitness\nACD\t1.0\n\nACE\tbright\n", None).unwrap_err();
        assert!(matches!(err, Error::Format { line: 4, .. }), "{err}");
    }

    #[test]
    fn wrong_wild_type_residue_rejected() {
        let err = load("mutations\tfitness\nWT\t1\nC1G\t2\n", Some("ACD")).unwrap_err();
        assert!(matches!(err, Error::Format { line: 3, .. }), "{err}");
    }

    #[test]
    fn sequence_notation_uses_directive_or_first_record() {
        let l = load("# wild_type: ACE\nsequence\tfitness\nACD\t1\nACE\t2\n", None).unwrap();
        assert_eq!(l.wild_type(), b"ACE");
        assert!((l.single_effect(3, b'D').unwrap() + 1.0).abs() < 1e-15);
        let l = load("sequence\tfitness\nACD\t1\nACE\t2\n", None).unwrap();
        assert_eq!(l.wild_type(), b"ACD");
    }

    #[test]
    fn duplicate_records_rejected() {
        let err = load("sequence\tfitness\nACD\t1\nACD\t2\n", None).unwrap_err();
        assert!(matches!(err, Error::Format { line: 3, .. }), "{err}");
    }

    #[test]
    fn length_mismatch_rejected() {
        let l = load("sequence\tfitness\nACD\t1\n", None).unwrap();
        assert!(l.fitness(b"AC").is_err());
    }

    #[test]
    fn protein_problem_negates_decoded_fitness() {
        let l = load("mutations\tfitness\nWT\t3.0\nA1G\t3.5\n", Some("AC")).unwrap();
        let p = ProteinProblem::new("toy", l).unwrap();
        let x = p.codec().encode_one_hot(b"GC", 1.0, 0.0).unwrap();
        assert_eq!(p.evaluate(&x), -3.5);
        assert_eq!(p.space().dimension(), 40);
    }
}
