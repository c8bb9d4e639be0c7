//! Experiment orchestration: plans of algorithms × problems × repeats,
//! competition-style ranking, descriptive statistics and CSV/JSON export.

mod bench;
mod config;
mod io;
mod plan;
mod rank;
mod stats;

pub use bench::{continuous_problems, nk_problems, protein_problem};
pub use config::{ConfigDocument, RUN_KEYS};
pub use io::{
    export, import_records, import_scores, import_summary, read_csv, read_json, records_from_rows,
    run_rows, trace_file_name, trace_rows, write_csv, write_json, Format, Results, RunRow,
    TraceRow, RANKING_HEADER, RUNS_HEADER, SUMMARY_HEADER, TRACES_HEADER,
};
pub use plan::{
    parse_algorithms, run_experiment, run_seed, valid_algorithm_names, AlgorithmSpec,
    ExperimentPlan,
};
pub use rank::{average_ranks, cec_rank, AlgorithmScore, ProblemRanks, RankingTable};
pub use stats::{describe, quantile, summarize, SummaryRow};

use crate::error::Result;
use crate::record::RunRecord;

/// Ranks and summarizes a finished record set. Ranking is skipped when the
/// repeats are unbalanced.
pub fn analyze(records: Vec<RunRecord>) -> Result<Results> {
    let ranking = cec_rank(&records).ok();
    let summary = if records.is_empty() {
        Vec::new()
    } else {
        summarize(&records)?
    };
    Ok(Results {
        records,
        ranking,
        summary,
    })
}
