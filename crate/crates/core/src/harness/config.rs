use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use super::plan::AlgorithmSpec;
use crate::baselines::BaselineConfig;
use crate::error::{Error, Result};
use crate::oio::OioConfig;

/// A flat `key = value` document.
///
/// Blank lines and lines starting with `#` are skipped. Keys of the form
/// `oio.<field>` override [`OioConfig`] fields; `hc.`, `sa.`, `ga.`, `de.`
/// and `pso.` prefixes override [`BaselineConfig`] fields of that
/// algorithm. Unprefixed keys are the run settings in [`RUN_KEYS`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigDocument {
    entries: BTreeMap<String, Entry>,
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    line: usize,
    value: String,
}

const SECTIONS: [&str; 6] = ["oio", "hc", "sa", "ga", "de", "pso"];

/// Unprefixed keys understood by the command-line front end.
pub const RUN_KEYS: [&str; 7] = ["seed", "budget", "repeats", "jobs", "output_dir", "timing", "algorithms"];

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| Error::format(line, format!("expected key = value, got '{trimmed}'")))?;
            let key = key.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(Error::format(line, "empty key"));
            }
            if let Some((section, field)) = key.split_once('.') {
                if !SECTIONS.contains(&section) || field.is_empty() {
                    return Err(Error::format(line, format!("unknown key '{key}'")));
                }
            } else if !RUN_KEYS.contains(&key.as_str()) {
                return Err(Error::format(line, format!("unknown key '{key}'")));
            }
            let entry = Entry {
                line,
                value: value.trim().to_string(),
            };
            if let Some(prev) = entries.insert(key.clone(), entry) {
                return Err(Error::format(
                    line,
                    format!("key '{key}' already set on line {}", prev.line),
                ));
            }
        }
        let doc = Self { entries };
        doc.check_fields()?;
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Raw value of an unprefixed setting.
    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    /// Parsed value of an unprefixed setting.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|_| Error::format(e.line, format!("invalid value '{}' for {key}", e.value))),
        }
    }

    pub fn oio_config(&self) -> Result<OioConfig> {
        self.apply("oio", OioConfig::default())
    }

    pub fn baseline_config(&self, base: BaselineConfig) -> Result<BaselineConfig> {
        let section = base.algorithm.tag().to_ascii_lowercase();
        self.apply(&section, base)
    }

    /// Applies this document's overrides to an algorithm entry.
    pub fn configure(&self, spec: &AlgorithmSpec) -> Result<AlgorithmSpec> {
        Ok(match spec {
            AlgorithmSpec::Oio(c) => AlgorithmSpec::Oio(self.apply("oio", c.clone())?),
            AlgorithmSpec::Baseline(c) => AlgorithmSpec::Baseline(self.baseline_config(c.clone())?),
        })
    }

    fn section(&self, section: &str) -> impl Iterator<Item = (&str, &Entry)> {
        let prefix = format!("{section}.");
        self.entries
            .iter()
            .filter_map(move |(k, e)| k.strip_prefix(&prefix).map(|f| (f, e)))
    }

    fn apply<T: Serialize + DeserializeOwned>(&self, section: &str, base: T) -> Result<T> {
        let mut value = serde_json::to_value(&base).map_err(|e| Error::InvalidState(e.to_string()))?;
        let map = value
            .as_object_mut()
            .ok_or_else(|| Error::InvalidState("configuration is not a record".into()))?;
        let mut last_line = 0;
        for (field, entry) in self.section(section) {
            if field == "algorithm" {
                return Err(Error::format(entry.line, format!("'{section}.algorithm' cannot be set")));
            }
            let slot = map
                .get_mut(field)
                .ok_or_else(|| Error::format(entry.line, format!("unknown key '{section}.{field}'")))?;
            *slot = typed_like(slot, &entry.value)
                .ok_or_else(|| Error::format(entry.line, format!("invalid value '{}' for {section}.{field}", entry.value)))?;
            last_line = last_line.max(entry.line);
        }
        serde_json::from_value(value).map_err(|e| Error::format(last_line, e.to_string()))
    }

    fn check_fields(&self) -> Result<()> {
        self.oio_config()?;
        for alg in crate::baselines::Algorithm::ALL {
            self.baseline_config(BaselineConfig::new(alg))?;
        }
        Ok(())
    }
}

fn typed_like(current: &Value, text: &str) -> Option<Value> {
    match current {
        Value::Bool(_) => text.parse::<bool>().ok().map(Value::Bool),
        Value::Number(n) if n.is_u64() => text.parse::<u64>().ok().map(Value::from),
        Value::Number(_) => text
            .parse::<f64>()
            .ok()
            .and_then(serde_json::Number::from_f64)
            .map(Value::Number),
        _ => Some(Value::String(text.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::Algorithm;

    #[test]
    fn overrides_and_run_settings() {
        let doc = ConfigDocument::parse(
            "# comment\n\noio.num_tentacles = 3\noio.inertia=0.5\nga.population = 20\nseed = 9\n",
        )
        .unwrap();
        let oio = doc.oio_config().unwrap();
        assert_eq!(oio.num_tentacles, 3);
        assert_eq!(oio.inertia, 0.5);
        assert_eq!(oio.suckers_per_tentacle, 40);
        let ga = doc.baseline_config(BaselineConfig::new(Algorithm::Genetic)).unwrap();
        assert_eq!(ga.population, 20);
        let de = doc
            .baseline_config(BaselineConfig::new(Algorithm::DifferentialEvolution))
            .unwrap();
        assert_eq!(de.population, 50);
        assert_eq!(doc.get::<u64>("seed").unwrap(), Some(9));
        assert_eq!(doc.get::<u64>("budget").unwrap(), None);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("oio.num_tentacles = 5\nnonsense\n", 2),
            ("oio.bogus = 1\n", 1),
            ("\nxyz.field = 1\n", 2),
            ("oio.num_tentacles = -1\n", 1),
            ("oio.c1 = 1\noio.c1 = 2\n", 2),
            ("hc.algorithm = GA\n", 1),
            ("seed = 1\nsed = 2\n", 2),
        ];
        for (text, line) in cases {
            match ConfigDocument::parse(text) {
                Err(Error::Format { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn float_field_accepts_integer_text() {
        let doc = ConfigDocument::parse("sa.initial_temperature = 50\n").unwrap();
        let sa = doc
            .baseline_config(BaselineConfig::new(Algorithm::SimulatedAnnealing))
            .unwrap();
        assert_eq!(sa.initial_temperature, 50.0);
    }
}
