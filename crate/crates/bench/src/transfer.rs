//! The `transfer` pipeline: replay pQAOA-trained angles on the full model.

use std::collections::BTreeMap;

use rayon::prelude::*;

use qslice::trainer::{transfer_evaluate, TrainingTrace};

use crate::config::{Algorithm, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::record::{write_csv, ExperimentRecord, TransferRecord, TRANSFER_HEADER};
use crate::run::{prepare, trace_path, transfer_seed, PreparedInstance};

/// Mean absolute transfer-vs-QAOA ratio difference for one (algorithm, p).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TransferSummary {
    pub algorithm: String,
    pub p: usize,
    pub pairs: usize,
    pub mean_abs_diff: Option<f64>,
    pub mean_transfer_ratio: Option<f64>,
    pub mean_qaoa_ratio: Option<f64>,
}

#[derive(Debug, Default)]
pub struct TransferOutcome {
    pub records: Vec<TransferRecord>,
    pub summary: Vec<TransferSummary>,
}

impl TransferOutcome {
    pub fn skipped(&self) -> usize {
        self.records.iter().filter(|r| r.status != "ok").count()
    }
}

fn load_qaoa_ratios(cfg: &ExperimentConfig) -> BTreeMap<(String, usize), f64> {
    let path = cfg.output_dir.join("results.csv");
    let Ok(mut reader) = csv::Reader::from_path(path) else {
        return BTreeMap::new();
    };
    reader
        .deserialize::<ExperimentRecord>()
        .filter_map(|r| r.ok())
        .filter(|r| r.algorithm == Algorithm::Qaoa.name() && r.is_ok())
        .filter_map(|r| Some(((r.instance_id, r.p), r.ratio?)))
        .collect()
}

fn evaluate_one(
    prep: &PreparedInstance,
    alg: Algorithm,
    p: usize,
    cfg: &ExperimentConfig,
    qaoa: &BTreeMap<(String, usize), f64>,
) -> TransferRecord {
    let seed = transfer_seed(cfg.seed, prep.index, alg, p);
    let mut rec = TransferRecord {
        instance_id: prep.id.clone(),
        algorithm: alg.name().into(),
        p,
        status: "skipped".into(),
        skip_reason: String::new(),
        seed,
        sources: None,
        best_source: None,
        transfer_mean_energy: None,
        transfer_ratio: None,
        transfer_best_sample_ratio: None,
        qaoa_ratio: qaoa.get(&(prep.id.clone(), p)).copied(),
        abs_diff: None,
    };
    let path = cfg.output_dir.join(trace_path(&prep.id, alg, p));
    let trace = match std::fs::read_to_string(&path)
        .map_err(|e| e.to_string())
        .and_then(|t| TrainingTrace::from_json(&t).map_err(|e| e.to_string()))
    {
        Ok(t) => t,
        Err(e) => {
            rec.skip_reason = format!("missing trace {}: {e}", path.display());
            return rec;
        }
    };
    match transfer_evaluate(&prep.model, &trace, cfg.final_samples, seed, prep.optimal_energy) {
        Ok(result) => {
            let best = result.best_source();
            rec.status = "ok".into();
            rec.sources = Some(result.sources.len());
            rec.best_source = Some(result.best);
            rec.transfer_mean_energy = Some(best.mean_energy);
            rec.transfer_ratio = Some(best.ratio);
            rec.transfer_best_sample_ratio = Some(best.best_sample_ratio);
            rec.abs_diff = rec.qaoa_ratio.map(|q| (q - best.ratio).abs());
        }
        Err(e) => rec.skip_reason = e.to_string(),
    }
    rec
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Evaluate every pQAOA trace on its full model and pair it with the direct
/// QAOA ratio from `results.csv`. Writes `transfer.csv` and
/// `transfer_summary.csv`.
pub fn cmd_transfer(cfg: &ExperimentConfig) -> Result<TransferOutcome> {
    cfg.validate()?;
    let qaoa = load_qaoa_ratios(cfg);
    let prepared: Vec<PreparedInstance> = cfg
        .load_instances()?
        .into_par_iter()
        .enumerate()
        .map(|(i, (id, inst))| prepare(id, i, inst, cfg.seed))
        .collect::<Result<_>>()?;
    let mut ps = cfg.p_range.clone();
    ps.sort_unstable();
    ps.dedup();
    let algs: Vec<Algorithm> = [Algorithm::PqaoaMulti, Algorithm::PqaoaSingle]
        .into_iter()
        .filter(|a| cfg.algorithms.contains(a))
        .collect();
    let mut jobs: Vec<(&PreparedInstance, Algorithm, usize)> = Vec::new();
    for prep in &prepared {
        for &a in &algs {
            jobs.extend(ps.iter().map(|&p| (prep, a, p)));
        }
    }
    let mut records: Vec<TransferRecord> = jobs
        .par_iter()
        .map(|&(prep, alg, p)| evaluate_one(prep, alg, p, cfg, &qaoa))
        .collect();
    records.sort_by(|a, b| (&a.instance_id, &a.algorithm, a.p).cmp(&(&b.instance_id, &b.algorithm, b.p)));

    let mut groups: BTreeMap<(String, usize), Vec<&TransferRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.status == "ok") {
        groups.entry((r.algorithm.clone(), r.p)).or_default().push(r);
    }
    let summary = groups
        .into_iter()
        .map(|((algorithm, p), rows)| TransferSummary {
            pairs: rows.iter().filter(|r| r.abs_diff.is_some()).count(),
            mean_abs_diff: mean(rows.iter().filter_map(|r| r.abs_diff)),
            mean_transfer_ratio: mean(rows.iter().filter_map(|r| r.transfer_ratio)),
            mean_qaoa_ratio: mean(rows.iter().filter_map(|r| r.qaoa_ratio)),
            algorithm,
            p,
        })
        .collect::<Vec<_>>();
    std::fs::create_dir_all(&cfg.output_dir).map_err(BenchError::io(&cfg.output_dir))?;
    write_csv(&cfg.output_dir.join("transfer.csv"), TRANSFER_HEADER, &records)?;
    write_csv(
        &cfg.output_dir.join("transfer_summary.csv"),
        &["algorithm", "p", "pairs", "mean_abs_diff", "mean_transfer_ratio", "mean_qaoa_ratio"],
        &summary,
    )?;
    Ok(TransferOutcome { records, summary })
}
