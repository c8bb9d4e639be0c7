//! `oio`: run the octopus optimizer and the classic baselines on the NK,
//! continuous and protein benchmarks, and rank or re-export saved results.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use octopus_core::harness::{
    self, analyze, continuous_problems, export, import_records, nk_problems, parse_algorithms,
    protein_problem, read_csv, read_json, records_from_rows, run_experiment, write_csv,
    write_json, AlgorithmSpec, ConfigDocument, ExperimentPlan, Format, Results, RunRow,
};
use octopus_core::problems::{TableFormat, CANONICAL_CONFIGS, DEFAULT_UNKNOWN_PENALTY};
use octopus_core::{Error, Objective, RunRecord};

const DEFAULT_BUDGET: usize = 20_000;
const DEFAULT_REPEATS: usize = 10;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_OUTPUT: &str = "results";

#[derive(Parser)]
#[command(name = "oio", version, about = "Octopus-inspired optimization benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One run of one algorithm on one problem.
    Run(RunArgs),
    /// The five canonical NK landscapes (or a subset).
    BenchNk(NkArgs),
    /// The continuous suite (or a subset).
    BenchContinuous(ContinuousArgs),
    /// Sequence design against a fitness table.
    BenchProtein(ProteinArgs),
    /// Re-rank saved runs.
    Rank(RankArgs),
    /// Convert saved results to another format.
    Export(ExportArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Master seed [default: 1]
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluations per run [default: 20000]
    #[arg(long)]
    budget: Option<usize>,
    /// Key-value file overriding algorithm settings
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: results]
    #[arg(long, env = "OIO_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
    /// Worker threads; 0 uses every core [default: 0]
    #[arg(long)]
    jobs: Option<usize>,
    /// Record wall-clock time (outputs are then no longer reproducible)
    #[arg(long)]
    timing: bool,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args, Clone)]
struct BenchCommon {
    #[command(flatten)]
    common: Common,
    /// Runs per algorithm and problem [default: 10]
    #[arg(long)]
    repeats: Option<usize>,
    /// Comma-separated algorithm list [default: OIO,HC,SA,GA,DE,PSO]
    #[arg(long)]
    algorithms: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// OIO, HC, SA, GA, DE or PSO
    #[arg(long)]
    algorithm: String,
    /// Continuous function or NK configuration name
    #[arg(long)]
    problem: String,
    /// Dimension of continuous problems
    #[arg(long, default_value_t = 10)]
    dimension: usize,
}

#[derive(Args)]
struct NkArgs {
    #[command(flatten)]
    bench: BenchCommon,
    /// Comma-separated subset of simple, moderate, hard, very-hard, complex
    #[arg(long, value_delimiter = ',')]
    configs: Vec<String>,
}

#[derive(Args)]
struct ContinuousArgs {
    #[command(flatten)]
    bench: BenchCommon,
    /// Comma-separated subset of the suite
    #[arg(long, value_delimiter = ',')]
    functions: Vec<String>,
    #[arg(long, default_value_t = 10)]
    dimension: usize,
}

#[derive(Args)]
struct ProteinArgs {
    #[command(flatten)]
    bench: BenchCommon,
    /// Tab-separated fitness table
    #[arg(long)]
    dataset: PathBuf,
    /// Wild-type sequence, overriding any directive in the table
    #[arg(long)]
    wild_type: Option<String>,
    /// Fitness offset of unseen substitutions in the additive model
    #[arg(long, default_value_t = DEFAULT_UNKNOWN_PENALTY)]
    unknown_penalty: f64,
}

#[derive(Args)]
struct RankArgs {
    /// A runs table, or a directory holding one
    input: PathBuf,
    /// Directory for the ranking table; omitted prints only
    #[arg(long, env = "OIO_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct ExportArgs {
    /// Directory written by a bench command
    input: PathBuf,
    /// Format of the input [default: csv]
    #[arg(long, default_value = "csv")]
    from: String,
    /// Format to write
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, env = "OIO_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidArgument(_) => Failure::Usage(msg),
            Error::InvalidState(_) | Error::BudgetExhausted { .. } => Failure::Runtime(msg),
            Error::Format { .. } | Error::Io { .. } | Error::Csv { .. } | Error::Json { .. } => {
                Failure::Io(msg)
            }
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::BenchNk(a) => cmd_bench_nk(a),
        Command::BenchContinuous(a) => cmd_bench_continuous(a),
        Command::BenchProtein(a) => cmd_bench_protein(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Export(a) => cmd_export(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

/// Flags, then the config file, then built-in defaults.
struct Settings {
    doc: ConfigDocument,
    seed: u64,
    budget: usize,
    repeats: usize,
    jobs: usize,
    output_dir: PathBuf,
    format: Format,
    timing: bool,
}

impl Settings {
    fn resolve(common: &Common, repeats: Option<usize>) -> Result<Self, Failure> {
        let doc = match &common.config {
            Some(path) => ConfigDocument::load(path).map_err(|e| match e {
                Error::Format { .. } => Failure::Usage(format!("{}: {e}", path.display())),
                other => other.into(),
            })?,
            None => ConfigDocument::default(),
        };
        Ok(Self {
            seed: pick(common.seed, &doc, "seed", DEFAULT_SEED)?,
            budget: pick(common.budget, &doc, "budget", DEFAULT_BUDGET)?,
            repeats: pick(repeats, &doc, "repeats", DEFAULT_REPEATS)?,
            jobs: pick(common.jobs, &doc, "jobs", 0)?,
            output_dir: match &common.output_dir {
                Some(p) => p.clone(),
                None => doc.raw("output_dir").unwrap_or(DEFAULT_OUTPUT).into(),
            },
            format: common.format.parse()?,
            timing: common.timing || doc.get::<bool>("timing")?.unwrap_or(false),
            doc,
        })
    }

    fn algorithms(&self, list: Option<&str>) -> Result<Vec<AlgorithmSpec>, Failure> {
        let specs = match list.or(self.doc.raw("algorithms")) {
            Some(list) => parse_algorithms(list)?,
            None => AlgorithmSpec::defaults(),
        };
        Ok(specs
            .iter()
            .map(|s| self.doc.configure(s))
            .collect::<Result<_, _>>()?)
    }
}

fn pick<T: std::str::FromStr>(
    flag: Option<T>,
    doc: &ConfigDocument,
    key: &str,
    default: T,
) -> Result<T, Failure> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(doc.get(key)?.unwrap_or(default)),
    }
}

fn bench(
    args: &BenchCommon,
    problems: impl FnOnce(&Settings) -> Result<Vec<Arc<dyn Objective>>, Failure>,
) -> Result<(Settings, Vec<RunRecord>), Failure> {
    let settings = Settings::resolve(&args.common, args.repeats)?;
    let algorithms = settings.algorithms(args.algorithms.as_deref())?;
    let mut plan = ExperimentPlan::new(algorithms, problems(&settings)?, settings.repeats, settings.budget);
    plan.record_timing = settings.timing;
    let records = run_experiment(&plan, settings.seed, settings.jobs)?;
    Ok((settings, records))
}

fn finish(records: Vec<RunRecord>, settings: &Settings) -> Outcome {
    let faults = records.iter().filter(|r| r.budget_fault).count();
    let results = analyze(records)?;
    export(&results, &settings.output_dir, settings.format)?;
    print_results(&results);
    println!("wrote {}", settings.output_dir.display());
    if faults > 0 {
        return Err(Failure::Runtime(format!("{faults} run(s) exceeded the evaluation budget")));
    }
    Ok(())
}

fn print_results(results: &Results) {
    for row in &results.summary {
        println!(
            "{:<6} {:<24} mean {:>14.6e}  median {:>14.6e}  std {:>11.4e}",
            row.algorithm, row.problem, row.mean, row.median, row.std
        );
    }
    if let Some(ranking) = &results.ranking {
        println!("rank  algorithm  score");
        for s in &ranking.scores {
            println!("{:>4}  {:<9}  {}", s.rank, s.algorithm, s.total_score);
        }
    }
}

fn cmd_run(args: RunArgs) -> Outcome {
    let settings = Settings::resolve(&args.common, Some(1))?;
    let spec = settings.algorithms(Some(&args.algorithm))?;
    let name = args.problem.to_ascii_lowercase();
    let nk_name = name.strip_prefix("nk-").unwrap_or(&name);
    let problems = if CANONICAL_CONFIGS.iter().any(|c| c.0 == nk_name) {
        nk_problems(&[nk_name.to_string()], settings.seed)?
    } else {
        continuous_problems(std::slice::from_ref(&name), args.dimension)?
    };
    let mut plan = ExperimentPlan::new(spec, problems, 1, settings.budget);
    plan.record_timing = settings.timing;
    let record = run_experiment(&plan, settings.seed, 1)?.remove(0);

    fs::create_dir_all(&settings.output_dir).map_err(|e| Error::Io {
        path: settings.output_dir.clone(),
        source: e,
    })?;
    let path = settings.output_dir.join(format!(
        "{}.json",
        harness::trace_file_name(&record, Format::Json).trim_end_matches(".json")
    ));
    write_json(&path, &record)?;
    println!(
        "{} on {}: final {} after {} evaluations",
        record.algorithm, record.problem, record.final_fitness, record.evaluations
    );
    println!("wrote {}", path.display());
    if record.budget_fault {
        return Err(Failure::Runtime("the run exceeded the evaluation budget".into()));
    }
    Ok(())
}

fn cmd_bench_nk(args: NkArgs) -> Outcome {
    let (settings, records) = bench(&args.bench, |s| Ok(nk_problems(&args.configs, s.seed)?))?;
    finish(records, &settings)
}

fn cmd_bench_continuous(args: ContinuousArgs) -> Outcome {
    let (settings, records) = bench(&args.bench, |_| {
        Ok(continuous_problems(&args.functions, args.dimension)?)
    })?;
    finish(records, &settings)
}

fn cmd_bench_protein(args: ProteinArgs) -> Outcome {
    let format = TableFormat {
        notation: None,
        wild_type: args.wild_type.clone(),
        unknown_penalty: args.unknown_penalty,
    };
    let problem = Arc::new(protein_problem(&args.dataset, &format)?);
    let shared: Arc<dyn Objective> = problem.clone();
    let (settings, records) = bench(&args.bench, |_| Ok(vec![shared]))?;

    let mut rows = Vec::with_capacity(records.len());
    for r in &records {
        let sequence = problem.decode(&r.best_position)?;
        rows.push(BestSequence {
            algorithm: r.algorithm.clone(),
            problem: r.problem.clone(),
            seed: r.seed,
            sequence: String::from_utf8_lossy(&sequence).into_owned(),
            fitness: -r.final_fitness,
        });
    }
    if let Some(best) = rows.iter().max_by(|a, b| a.fitness.total_cmp(&b.fitness)) {
        println!("best sequence {} (fitness {}, {})", best.sequence, best.fitness, best.algorithm);
    }
    fs::create_dir_all(&settings.output_dir).map_err(|e| Error::Io {
        path: settings.output_dir.clone(),
        source: e,
    })?;
    let path = settings
        .output_dir
        .join(format!("best_sequences.{}", settings.format.extension()));
    match settings.format {
        Format::Csv => write_csv(&path, &BEST_HEADER, &rows)?,
        Format::Json => write_json(&path, &rows)?,
    }
    finish(records, &settings)
}

const BEST_HEADER: [&str; 5] = ["algorithm", "problem", "seed", "sequence", "fitness"];

#[derive(serde::Serialize)]
struct BestSequence {
    algorithm: String,
    problem: String,
    seed: u64,
    sequence: String,
    fitness: f64,
}

fn runs_path(input: &Path, format: Format) -> PathBuf {
    if input.is_dir() {
        input.join(format!("runs.{}", format.extension()))
    } else {
        input.to_path_buf()
    }
}

fn input_format(path: &Path, fallback: Format) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => ext.parse().unwrap_or(fallback),
        None => fallback,
    }
}

fn cmd_rank(args: RankArgs) -> Outcome {
    let out_format: Format = args.format.parse()?;
    let path = runs_path(&args.input, out_format);
    let rows: Vec<RunRow> = match input_format(&path, out_format) {
        Format::Csv => read_csv(&path)?,
        Format::Json => read_json(&path)?,
    };
    let records = records_from_rows(rows, Vec::new())?;
    let ranking = harness::cec_rank(&records)?;
    println!("rank  algorithm  score");
    for s in &ranking.scores {
        println!("{:>4}  {:<9}  {}", s.rank, s.algorithm, s.total_score);
    }
    if let Some(dir) = args.output_dir {
        fs::create_dir_all(&dir).map_err(|e| Error::Io {
            path: dir.clone(),
            source: e,
        })?;
        let out = dir.join(format!("ranking.{}", out_format.extension()));
        match out_format {
            Format::Csv => write_csv(&out, &harness::RANKING_HEADER, &ranking.scores)?,
            Format::Json => write_json(&out, &ranking)?,
        }
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn cmd_export(args: ExportArgs) -> Outcome {
    let from: Format = args.from.parse()?;
    let to: Format = args.format.parse()?;
    let records = import_records(&args.input, from)?;
    let results = analyze(records)?;
    let dir = args.output_dir.unwrap_or_else(|| args.input.clone());
    export(&results, &dir, to)?;
    println!("wrote {}", dir.display());
    Ok(())
}
