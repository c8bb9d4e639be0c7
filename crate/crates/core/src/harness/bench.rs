use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::problems::{
    continuous_suite, generate_nk, load_empirical, NkProblem, ProteinProblem, TableFormat,
    CANONICAL_CONFIGS, SUITE_NAMES,
};
use crate::rng::derive_seed;

/// Canonical NK configurations by name (`simple`, `moderate`, `hard`,
/// `very-hard`, `complex`); an empty selection means all five.
///
/// Instance tables are drawn from a seed derived from `master_seed` and the
/// configuration name, so a master seed fixes both the instances and the
/// runs.
pub fn nk_problems(selection: &[String], master_seed: u64) -> Result<Vec<Arc<dyn Objective>>> {
    let names = select(selection, CANONICAL_CONFIGS.map(|c| c.0).as_slice(), "NK configuration")?;
    names
        .into_iter()
        .map(|name| {
            let (_, n, k) = CANONICAL_CONFIGS
                .into_iter()
                .find(|c| c.0 == name)
                .expect("validated above");
            let landscape = generate_nk(n, k, derive_seed(master_seed, &format!("nk/{name}")))?;
            let id = format!("nk-{name}-n{n}-k{k}");
            Ok(Arc::new(NkProblem::with_id(id, landscape)) as Arc<dyn Objective>)
        })
        .collect()
}

/// Continuous suite members by name; an empty selection means the whole
/// suite.
pub fn continuous_problems(selection: &[String], dimension: usize) -> Result<Vec<Arc<dyn Objective>>> {
    select(selection, &SUITE_NAMES, "function")?
        .into_iter()
        .map(|name| Ok(Arc::new(continuous_suite(name, dimension)?) as Arc<dyn Objective>))
        .collect()
}

/// Loads a fitness table and wraps it as a protein design problem. The
/// problem id is the file stem.
pub fn protein_problem(path: &Path, format: &TableFormat) -> Result<ProteinProblem> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let landscape = load_empirical(BufReader::new(file), format)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "protein".to_string());
    ProteinProblem::new(format!("protein-{stem}"), landscape)
}

fn select<'a>(selection: &[String], valid: &[&'a str], what: &str) -> Result<Vec<&'a str>> {
    if selection.is_empty() {
        return Ok(valid.to_vec());
    }
    let mut out = Vec::new();
    for s in selection {
        let name = valid
            .iter()
            .find(|v| v.eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::invalid(format!("unknown {what} '{s}'; expected one of {}", valid.join(", ")))
            })?;
        if !out.contains(name) {
            out.push(*name);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_nk_configs_by_default() {
        let problems = nk_problems(&[], 1).unwrap();
        let ids: Vec<&str> = problems.iter().map(|p| p.id()).collect();
        assert_eq!(
            ids,
            [
                "nk-simple-n20-k2",
                "nk-moderate-n30-k3",
                "nk-hard-n50-k4",
                "nk-very-hard-n70-k4",
                "nk-complex-n100-k5"
            ]
        );
    }

    #[test]
    fn selection_is_validated() {
        assert_eq!(nk_problems(&["HARD".into()], 1).unwrap().len(), 1);
        let err = nk_problems(&["medium".into()], 1).err().unwrap().to_string();
        assert!(err.contains("simple"), "{err}");
        assert!(continuous_problems(&["cigar".into()], 10).is_err());
        let p = continuous_problems(&["sphere".into()], 3).unwrap();
        assert_eq!(p[0].space().dimension(), 3);
    }

    #[test]
    fn instances_follow_master_seed() {
        let x = vec![1.0; 20];
        let a = nk_problems(&["simple".into()], 3).unwrap();
        let b = nk_problems(&["simple".into()], 3).unwrap();
        assert_eq!(a[0].evaluate(&x), b[0].evaluate(&x));
    }
}
