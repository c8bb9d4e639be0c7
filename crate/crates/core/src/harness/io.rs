use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::rank::{AlgorithmScore, RankingTable};
use super::stats::SummaryRow;
use crate::error::{Error, Result};
use crate::record::{RunRecord, TracePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::invalid(format!("unknown format '{s}'; expected csv or json"))),
        }
    }
}

pub const RUNS_HEADER: [&str; 7] = [
    "algorithm",
    "problem",
    "seed",
    "final_fitness",
    "wall_time_s",
    "evaluations",
    "budget_fault",
];
pub const TRACES_HEADER: [&str; 5] = ["algorithm", "problem", "seed", "evaluations", "best_so_far"];
pub const RANKING_HEADER: [&str; 3] = ["algorithm", "total_score", "rank"];
pub const SUMMARY_HEADER: [&str; 10] = [
    "algorithm",
    "problem",
    "runs",
    "mean",
    "median",
    "std",
    "q1",
    "q3",
    "min",
    "max",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub algorithm: String,
    pub problem: String,
    pub seed: u64,
    pub final_fitness: f64,
    pub wall_time_s: f64,
    pub evaluations: usize,
    #[serde(default)]
    pub budget_fault: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub algorithm: String,
    pub problem: String,
    pub seed: u64,
    pub evaluations: usize,
    pub best_so_far: f64,
}

pub fn run_rows(records: &[RunRecord]) -> Vec<RunRow> {
    records
        .iter()
        .map(|r| RunRow {
            algorithm: r.algorithm.clone(),
            problem: r.problem.clone(),
            seed: r.seed,
            final_fitness: r.final_fitness,
            wall_time_s: r.wall_time_s,
            evaluations: r.evaluations,
            budget_fault: r.budget_fault,
        })
        .collect()
}

/// Long-format trace table: one row per trace point of every run.
pub fn trace_rows(records: &[RunRecord]) -> Vec<TraceRow> {
    records.iter().flat_map(record_trace_rows).collect()
}

fn record_trace_rows(r: &RunRecord) -> impl Iterator<Item = TraceRow> + '_ {
    r.trace.iter().map(|p| TraceRow {
        algorithm: r.algorithm.clone(),
        problem: r.problem.clone(),
        seed: r.seed,
        evaluations: p.evaluations,
        best_so_far: p.best_so_far,
    })
}

/// Rebuilds records from run and trace rows. Trace rows attach to the run
/// with the same (algorithm, problem, seed) in their listed order; rows
/// without a run are an error. Best positions are not part of the tables
/// and come back empty.
pub fn records_from_rows(runs: Vec<RunRow>, traces: Vec<TraceRow>) -> Result<Vec<RunRecord>> {
    let mut records: Vec<RunRecord> = runs
        .into_iter()
        .map(|r| RunRecord {
            algorithm: r.algorithm,
            problem: r.problem,
            seed: r.seed,
            final_fitness: r.final_fitness,
            evaluations: r.evaluations,
            wall_time_s: r.wall_time_s,
            budget_fault: r.budget_fault,
            trace: Vec::new(),
            best_position: Vec::new(),
        })
        .collect();
    let mut keys: Vec<((&str, &str, u64), usize)> = Vec::new();
    for (i, r) in records.iter().enumerate() {
        keys.push(((r.algorithm.as_str(), r.problem.as_str(), r.seed), i));
    }
    keys.sort();
    if let Some(w) = keys.windows(2).find(|w| w[0].0 == w[1].0) {
        let (a, p, s) = w[0].0;
        return Err(Error::invalid(format!("duplicate run {a}/{p}/{s}")));
    }
    let mut slots: Vec<(usize, TracePoint)> = Vec::with_capacity(traces.len());
    for t in traces {
        let key = (t.algorithm.as_str(), t.problem.as_str(), t.seed);
        let i = keys
            .binary_search_by(|(k, _)| k.cmp(&key))
            .map(|j| keys[j].1)
            .map_err(|_| {
                Error::invalid(format!(
                    "trace rows for {}/{}/{} have no matching run",
                    t.algorithm, t.problem, t.seed
                ))
            })?;
        slots.push((
            i,
            TracePoint {
                evaluations: t.evaluations,
                best_so_far: t.best_so_far,
            },
        ));
    }
    drop(keys);
    for (i, p) in slots {
        records[i].trace.push(p);
    }
    Ok(records)
}

pub fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn write_table<T: Serialize>(path: &Path, header: &[&str], rows: &[T], format: Format) -> Result<()> {
    match format {
        Format::Csv => write_csv(path, header, rows),
        Format::Json => write_json(path, rows),
    }
}

fn read_table<T: DeserializeOwned>(path: &Path, format: Format) -> Result<Vec<T>> {
    match format {
        Format::Csv => read_csv(path),
        Format::Json => read_json(path),
    }
}

/// Everything an experiment writes.
#[derive(Debug, Clone, PartialEq)]
pub struct Results {
    pub records: Vec<RunRecord>,
    pub ranking: Option<RankingTable>,
    pub summary: Vec<SummaryRow>,
}

/// File name of a run's own trace file.
pub fn trace_file_name(record: &RunRecord, format: Format) -> String {
    let clean = |s: &str| -> String {
        s.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
            .collect()
    };
    format!(
        "{}_{}_{}.{}",
        clean(&record.algorithm),
        clean(&record.problem),
        record.seed,
        format.extension()
    )
}

/// Writes `runs`, `traces`, `ranking` and `summary` tables into `dir`, plus
/// one trace file per run under `dir/traces/`. Returns the written paths.
pub fn export(results: &Results, dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let ext = format.extension();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let path = dir.join(format!("runs.{ext}"));
    write_table(&path, &RUNS_HEADER, &run_rows(&results.records), format)?;
    written.push(path);

    let path = dir.join(format!("traces.{ext}"));
    write_table(&path, &TRACES_HEADER, &trace_rows(&results.records), format)?;
    written.push(path);

    if let Some(ranking) = &results.ranking {
        let path = dir.join(format!("ranking.{ext}"));
        match format {
            Format::Csv => write_csv(&path, &RANKING_HEADER, &ranking.scores)?,
            Format::Json => write_json(&path, ranking)?,
        }
        written.push(path);
    }

    let path = dir.join(format!("summary.{ext}"));
    write_table(&path, &SUMMARY_HEADER, &results.summary, format)?;
    written.push(path);

    let trace_dir = dir.join("traces");
    fs::create_dir_all(&trace_dir).map_err(|e| Error::io(&trace_dir, e))?;
    for r in &results.records {
        let path = trace_dir.join(trace_file_name(r, format));
        let rows: Vec<TraceRow> = record_trace_rows(r).collect();
        write_table(&path, &TRACES_HEADER, &rows, format)?;
        written.push(path);
    }
    Ok(written)
}

/// Reads the run and trace tables written by [`export`].
pub fn import_records(dir: &Path, format: Format) -> Result<Vec<RunRecord>> {
    let ext = format.extension();
    let runs = read_table(&dir.join(format!("runs.{ext}")), format)?;
    let traces_path = dir.join(format!("traces.{ext}"));
    let traces = if traces_path.exists() {
        read_table(&traces_path, format)?
    } else {
        Vec::new()
    };
    records_from_rows(runs, traces)
}

/// Reads a ranking table. CSV holds only the scores; JSON holds the full
/// table.
pub fn import_scores(path: &Path, format: Format) -> Result<Vec<AlgorithmScore>> {
    match format {
        Format::Csv => read_csv(path),
        Format::Json => read_json::<RankingTable>(path).map(|t| t.scores),
    }
}

pub fn import_summary(path: &Path, format: Format) -> Result<Vec<SummaryRow>> {
    read_table(path, format)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunRecord {
        RunRecord {
            algorithm: "OIO".into(),
            problem: "nk-simple".into(),
            seed: 42,
            final_fitness: -0.625,
            evaluations: 30,
            wall_time_s: 0.0,
            budget_fault: false,
            trace: vec![
                TracePoint {
                    evaluations: 1,
                    best_so_far: -0.1,
                },
                TracePoint {
                    evaluations: 10,
                    best_so_far: -0.3333333333333333,
                },
                TracePoint {
                    evaluations: 30,
                    best_so_far: -0.625,
                },
            ],
            best_position: vec![],
        }
    }

    #[test]
    fn empty_runs_give_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs.csv");
        write_csv::<RunRow>(&path, &RUNS_HEADER, &[]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "algorithm,problem,seed,final_fitness,wall_time_s,evaluations,budget_fault\n");
        assert!(read_csv::<RunRow>(&path).unwrap().is_empty());
    }

    #[test]
    fn three_trace_rows() {
        let rows = trace_rows(&[sample()]);
        assert_eq!(rows.len(), 3);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traces.csv");
        write_csv(&path, &TRACES_HEADER, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "algorithm,problem,seed,evaluations,best_so_far");
        assert_eq!(lines[2], "OIO,nk-simple,42,10,-0.3333333333333333");
    }

    #[test]
    fn round_trip_both_formats() {
        let records = vec![sample()];
        let results = Results {
            records: records.clone(),
            ranking: None,
            summary: vec![],
        };
        for format in [Format::Csv, Format::Json] {
            let dir = tempfile::tempdir().unwrap();
            let written = export(&results, dir.path(), format).unwrap();
            assert_eq!(written.len(), 4);
            assert_eq!(import_records(dir.path(), format).unwrap(), records);
        }
    }

    #[test]
    fn orphan_trace_rows_rejected() {
        let mut rows = trace_rows(&[sample()]);
        rows[0].seed = 7;
        assert!(records_from_rows(run_rows(&[sample()]), rows).is_err());
    }

    #[test]
    fn missing_file_reports_path() {
        let err = read_csv::<RunRow>(Path::new("/nonexistent/runs.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/runs.csv"));
    }

    #[test]
    fn format_names() {
        assert_eq!("JSON".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
