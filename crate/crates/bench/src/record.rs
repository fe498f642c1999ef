//! Experiment records and their CSV schema.
//!
//! `results.csv` has one row per (instance, algorithm, p), sorted by
//! instance id, algorithm and p. Columns, in order:
//!
//! | column | meaning |
//! |---|---|
//! | `instance_id` | file stem of the instance, or `inline-<i>` |
//! | `n`, `vehicles`, `num_vars` | customers, fleet size, QUBO variables |
//! | `algorithm` | `qaoa`, `pqaoa-multi` or `pqaoa-single` |
//! | `p` | QAOA depth |
//! | `status` | `ok` or `skipped` |
//! | `skip_reason` | empty unless skipped |
//! | `master_seed` | seed of the whole run |
//! | `task_seed` | training seed, `derive_seed(master, [instance, algorithm, p])` |
//! | `final_seed` | seed of the final sampling pass |
//! | `warm_started` | start angles came from the `p − 1` run |
//! | `shots_per_eval` | circuit shots per objective evaluation |
//! | `subsamples_per_slice` | `m`, empty for plain QAOA |
//! | `qubits_allocated` | widest simulated register |
//! | `evaluations`, `total_shots` | optimizer cost |
//! | `train_best_objective` | best sampled training objective |
//! | `train_best_exact_objective` | noise-free objective at the best angles |
//! | `final_samples` | global samples in the final pass |
//! | `final_mean_energy`, `final_best_energy` | full-model energies of that pass |
//! | `optimal_energy`, `optimal_source` | reference optimum and its source (`brute-force` or `route-enum`) |
//! | `ratio` | `optimal_energy / final_mean_energy` |
//! | `best_sample_ratio` | `optimal_energy / final_best_energy` |
//! | `baseline_route_enum_ratio`, `baseline_heuristic_ratio` | classical references |
//! | `optimum_vehicles_used` | vehicles used by the enumerated optimum |
//! | `trace_file` | training trace, relative to the output directory |
//!
//! Optional numeric fields are empty when not applicable. Wall time is kept
//! out of the CSV (so replays are byte-identical) and written to
//! `records.jsonl` instead.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub instance_id: String,
    pub n: usize,
    pub vehicles: usize,
    pub num_vars: usize,
    pub algorithm: String,
    pub p: usize,
    pub status: String,
    pub skip_reason: String,
    pub master_seed: u64,
    pub task_seed: u64,
    pub final_seed: u64,
    pub warm_started: bool,
    pub shots_per_eval: u64,
    pub subsamples_per_slice: Option<usize>,
    pub qubits_allocated: Option<usize>,
    pub evaluations: Option<usize>,
    pub total_shots: Option<u64>,
    pub train_best_objective: Option<f64>,
    pub train_best_exact_objective: Option<f64>,
    pub final_samples: Option<u64>,
    pub final_mean_energy: Option<f64>,
    pub final_best_energy: Option<f64>,
    pub optimal_energy: f64,
    pub optimal_source: String,
    pub ratio: Option<f64>,
    pub best_sample_ratio: Option<f64>,
    pub baseline_route_enum_ratio: Option<f64>,
    pub baseline_heuristic_ratio: Option<f64>,
    pub optimum_vehicles_used: Option<usize>,
    pub trace_file: String,
}

impl ExperimentRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// JSON-lines form, with timing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimedRecord {
    #[serde(flatten)]
    pub record: ExperimentRecord,
    pub wall_time_ms: u128,
}

/// Row of `transfer.csv`: one per (instance, pQAOA algorithm, p).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferRecord {
    pub instance_id: String,
    pub algorithm: String,
    pub p: usize,
    pub status: String,
    pub skip_reason: String,
    pub seed: u64,
    /// Angle blocks evaluated (k for multi-angle, 1 for single-slice).
    pub sources: Option<usize>,
    pub best_source: Option<usize>,
    pub transfer_mean_energy: Option<f64>,
    pub transfer_ratio: Option<f64>,
    pub transfer_best_sample_ratio: Option<f64>,
    /// Direct QAOA ratio for the same instance and p, if recorded.
    pub qaoa_ratio: Option<f64>,
    pub abs_diff: Option<f64>,
}

/// Write rows as CSV with a header line (even when empty).
pub fn write_csv<T: Serialize>(path: &std::path::Path, header: &[&str], rows: &[T]) -> crate::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(crate::BenchError::io(path))?;
    Ok(())
}

pub const RECORD_HEADER: &[&str] = &[
    "instance_id",
    "n",
    "vehicles",
    "num_vars",
    "algorithm",
    "p",
    "status",
    "skip_reason",
    "master_seed",
    "task_seed",
    "final_seed",
    "warm_started",
    "shots_per_eval",
    "subsamples_per_slice",
    "qubits_allocated",
    "evaluations",
    "total_shots",
    "train_best_objective",
    "train_best_exact_objective",
    "final_samples",
    "final_mean_energy",
    "final_best_energy",
    "optimal_energy",
    "optimal_source",
    "ratio",
    "best_sample_ratio",
    "baseline_route_enum_ratio",
    "baseline_heuristic_ratio",
    "optimum_vehicles_used",
    "trace_file",
];

pub const TRANSFER_HEADER: &[&str] = &[
    "instance_id",
    "algorithm",
    "p",
    "status",
    "skip_reason",
    "seed",
    "sources",
    "best_source",
    "transfer_mean_energy",
    "transfer_ratio",
    "transfer_best_sample_ratio",
    "qaoa_ratio",
    "abs_diff",
];
