//! The `run` pipeline: train every (instance, algorithm, p), then sample
//! the trained circuit once more and score it against the reference optimum.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use qslice::instances::{heuristic_baseline, route_enum_optimal, ROUTE_ENUM_MAX_N};
use qslice::model::{brute_force_min, build_vrp_qubo, QuboModel, TagId, VrpInstance, BRUTE_FORCE_CAP};
use qslice::rng::derive_seed;
use qslice::sim::SampleSet;
use qslice::slicing::{decompose, slices_identical, SliceDecomposition};
use qslice::trainer::{
    train_multi_angle_pqaoa, train_multi_angle_pqaoa_from, train_qaoa, train_qaoa_from,
    train_single_slice_pqaoa, train_single_slice_pqaoa_from, PqaoaObjective, QaoaObjective,
    TrainingConfig, TrainingTrace,
};

use crate::config::{Algorithm, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::record::{write_csv, ExperimentRecord, TimedRecord, RECORD_HEADER};

/// Seed-path tags under the master seed.
mod stream {
    pub const TASK: u64 = 1;
    pub const HEURISTIC: u64 = 2;
    pub const FINAL: u64 = 3;
    pub const TRANSFER: u64 = 4;
}

pub(crate) fn task_seed(master: u64, instance: usize, alg: Algorithm, p: usize) -> u64 {
    derive_seed(master, &[stream::TASK, instance as u64, alg.code(), p as u64])
}

pub(crate) fn transfer_seed(master: u64, instance: usize, alg: Algorithm, p: usize) -> u64 {
    derive_seed(master, &[stream::TRANSFER, instance as u64, alg.code(), p as u64])
}

pub(crate) fn trace_path(instance_id: &str, alg: Algorithm, p: usize) -> String {
    format!("traces/{instance_id}__{}__p{p}.json", alg.name())
}

/// Everything computed once per instance.
pub struct PreparedInstance {
    pub id: String,
    pub index: usize,
    pub instance: VrpInstance,
    pub model: QuboModel,
    pub decomposition: SliceDecomposition,
    pub optimal_energy: f64,
    pub optimal_source: &'static str,
    pub route_enum_ratio: Option<f64>,
    pub heuristic_ratio: Option<f64>,
    pub optimum_vehicles_used: Option<usize>,
}

/// Vehicles become slices; the inter-vehicle coupling is the residual.
pub fn vehicle_decomposition(model: &QuboModel) -> Result<SliceDecomposition> {
    Ok(decompose(model, &BTreeSet::from([TagId::Coupling]))?)
}

pub fn prepare(id: String, index: usize, instance: VrpInstance, master: u64) -> Result<PreparedInstance> {
    let model = build_vrp_qubo(&instance)?;
    let decomposition = vehicle_decomposition(&model)?;
    let enumerated = if instance.n() <= ROUTE_ENUM_MAX_N {
        Some(route_enum_optimal(&instance)?)
    } else {
        None
    };
    let (optimal_energy, optimal_source) = if model.num_vars() <= BRUTE_FORCE_CAP {
        (brute_force_min(&model)?.energy, "brute-force")
    } else if let Some(e) = &enumerated {
        (e.qubo_energy, "route-enum")
    } else {
        return Err(BenchError::Config(format!(
            "instance {id}: no reference optimum within caps"
        )));
    };
    let heuristic = heuristic_baseline(&instance, derive_seed(master, &[stream::HEURISTIC, index as u64]))?;
    let ratio = |e: f64| qslice::instances::approximation_ratio(e, optimal_energy).ok();
    Ok(PreparedInstance {
        route_enum_ratio: enumerated.as_ref().and_then(|e| ratio(e.qubo_energy)),
        heuristic_ratio: ratio(heuristic.qubo_energy),
        optimum_vehicles_used: enumerated.as_ref().map(|e| e.vehicles_used),
        id,
        index,
        instance,
        model,
        decomposition,
        optimal_energy,
        optimal_source,
    })
}

/// Result of `cmd_run`.
#[derive(Debug, Default)]
pub struct RunOutcome {
    pub records: Vec<ExperimentRecord>,
    /// Traces of successful runs keyed by (instance id, algorithm, p).
    pub traces: BTreeMap<(String, Algorithm, usize), TrainingTrace>,
}

impl RunOutcome {
    pub fn skipped(&self) -> usize {
        self.records.iter().filter(|r| !r.is_ok()).count()
    }
}

fn skip_reason(prep: &PreparedInstance, alg: Algorithm, cfg: &TrainingConfig) -> Option<String> {
    let cap = cfg.max_qubits;
    match alg {
        Algorithm::Qaoa if prep.model.num_vars() > cap => Some(format!(
            "full model needs {} qubits, simulator cap is {cap}",
            prep.model.num_vars()
        )),
        Algorithm::PqaoaMulti | Algorithm::PqaoaSingle if prep.decomposition.max_slice_width() > cap => {
            Some(format!(
                "slice needs {} qubits, simulator cap is {cap}",
                prep.decomposition.max_slice_width()
            ))
        }
        Algorithm::PqaoaSingle if !slices_identical(&prep.decomposition) => {
            Some("slices are not identical".into())
        }
        _ => None,
    }
}

fn train(
    prep: &PreparedInstance,
    alg: Algorithm,
    p: usize,
    cfg: &TrainingConfig,
    warm: Option<&TrainingTrace>,
) -> qslice::Result<TrainingTrace> {
    let d = &prep.decomposition;
    match (alg, warm) {
        (Algorithm::Qaoa, None) => train_qaoa(&prep.model, p, cfg),
        (Algorithm::Qaoa, Some(t)) => train_qaoa_from(&prep.model, &t.best_angles.extended(), cfg),
        (Algorithm::PqaoaMulti, None) => train_multi_angle_pqaoa(d, p, cfg),
        (Algorithm::PqaoaMulti, Some(t)) => {
            train_multi_angle_pqaoa_from(d, &t.best_angles.extended(), cfg)
        }
        (Algorithm::PqaoaSingle, None) => train_single_slice_pqaoa(d, p, cfg),
        (Algorithm::PqaoaSingle, Some(t)) => {
            train_single_slice_pqaoa_from(d, &t.best_angles.extended(), cfg)
        }
    }
}

/// Smallest `m` with `m^k ≥ target`.
fn per_slice_quota(target: u64, k: usize) -> u64 {
    let mut m = 1u64;
    while m.checked_pow(k as u32).is_some_and(|v| v < target) {
        m += 1;
    }
    m
}

/// Draw the final global sample set from the trained circuit.
fn final_samples(
    prep: &PreparedInstance,
    alg: Algorithm,
    trace: &TrainingTrace,
    cfg: &TrainingConfig,
    total: u64,
    seed: u64,
) -> qslice::Result<SampleSet> {
    let p = trace.p;
    match alg {
        Algorithm::Qaoa => QaoaObjective::new(&prep.model, total, seed)?
            .samples(trace.best_angles.for_slice(0), 0),
        Algorithm::PqaoaMulti | Algorithm::PqaoaSingle => {
            let k = prep.decomposition.k();
            let final_cfg = if k == 1 {
                TrainingConfig {
                    shots_per_eval: Some(total),
                    subsamples_per_slice: 1,
                    seed,
                    ..cfg.clone()
                }
            } else {
                let m = per_slice_quota(total, k);
                TrainingConfig {
                    shots_per_eval: Some(cfg.shots(p).max(m)),
                    subsamples_per_slice: m as usize,
                    seed,
                    ..cfg.clone()
                }
            };
            let objective = if alg == Algorithm::PqaoaMulti {
                PqaoaObjective::multi_angle(&prep.decomposition, p, &final_cfg)?
            } else {
                PqaoaObjective::single_slice(&prep.decomposition, p, &final_cfg)?
            };
            objective.recombined_samples(&trace.best_angles, 0)
        }
    }
}

fn base_record(prep: &PreparedInstance, alg: Algorithm, p: usize, cfg: &ExperimentConfig) -> ExperimentRecord {
    let task_seed = task_seed(cfg.seed, prep.index, alg, p);
    ExperimentRecord {
        instance_id: prep.id.clone(),
        n: prep.instance.n(),
        vehicles: prep.instance.vehicles(),
        num_vars: prep.model.num_vars(),
        algorithm: alg.name().into(),
        p,
        status: "skipped".into(),
        skip_reason: String::new(),
        master_seed: cfg.seed,
        task_seed,
        final_seed: derive_seed(task_seed, &[stream::FINAL]),
        warm_started: false,
        shots_per_eval: cfg.training.shots(p),
        subsamples_per_slice: (alg != Algorithm::Qaoa).then_some(cfg.training.subsamples_per_slice),
        qubits_allocated: None,
        evaluations: None,
        total_shots: None,
        train_best_objective: None,
        train_best_exact_objective: None,
        final_samples: None,
        final_mean_energy: None,
        final_best_energy: None,
        optimal_energy: prep.optimal_energy,
        optimal_source: prep.optimal_source.into(),
        ratio: None,
        best_sample_ratio: None,
        baseline_route_enum_ratio: prep.route_enum_ratio,
        baseline_heuristic_ratio: prep.heuristic_ratio,
        optimum_vehicles_used: prep.optimum_vehicles_used,
        trace_file: String::new(),
    }
}

type TaskOutput = Vec<(TimedRecord, Option<TrainingTrace>)>;

/// Sweep `p` for one (instance, algorithm), warm-starting when configured.
fn run_task(prep: &PreparedInstance, alg: Algorithm, cfg: &ExperimentConfig) -> TaskOutput {
    let mut ps = cfg.p_range.clone();
    ps.sort_unstable();
    ps.dedup();
    let mut out: TaskOutput = Vec::new();
    let mut previous: Option<TrainingTrace> = None;
    for p in ps {
        let start = Instant::now();
        let mut rec = base_record(prep, alg, p, cfg);
        if let Some(reason) = skip_reason(prep, alg, &cfg.training) {
            rec.skip_reason = reason;
            out.push((TimedRecord { record: rec, wall_time_ms: 0 }, None));
            continue;
        }
        let tcfg = TrainingConfig {
            seed: rec.task_seed,
            ..cfg.training.clone()
        };
        let warm = previous
            .as_ref()
            .filter(|t| cfg.warm_start && t.p + 1 == p);
        let result = train(prep, alg, p, &tcfg, warm).and_then(|trace| {
            let samples = final_samples(prep, alg, &trace, &tcfg, cfg.final_samples, rec.final_seed)?;
            Ok((trace, samples))
        });
        let (trace, samples) = match result {
            Ok(v) => v,
            Err(e) => {
                rec.skip_reason = e.to_string();
                previous = None;
                out.push((
                    TimedRecord {
                        record: rec,
                        wall_time_ms: start.elapsed().as_millis(),
                    },
                    None,
                ));
                continue;
            }
        };
        let compiled = prep.model.compile();
        let mean = samples.mean_by(|z| compiled.energy(z)).unwrap_or(f64::NAN);
        let best = samples.min_by(|z| compiled.energy(z)).map(|b| b.1).unwrap_or(f64::NAN);
        let ratio = |e: f64| qslice::instances::approximation_ratio(e, prep.optimal_energy).ok();
        rec.status = "ok".into();
        rec.warm_started = warm.is_some();
        rec.qubits_allocated = Some(trace.qubits_allocated);
        rec.evaluations = Some(trace.evaluations);
        rec.total_shots = Some(trace.total_shots);
        rec.train_best_objective = Some(trace.best_objective);
        rec.train_best_exact_objective = Some(trace.best_exact_objective);
        rec.final_samples = Some(samples.shots());
        rec.final_mean_energy = Some(mean);
        rec.final_best_energy = Some(best);
        rec.ratio = ratio(mean);
        rec.best_sample_ratio = ratio(best);
        rec.trace_file = trace_path(&prep.id, alg, p);
        out.push((
            TimedRecord {
                record: rec,
                wall_time_ms: start.elapsed().as_millis(),
            },
            Some(trace.clone()),
        ));
        previous = Some(trace);
    }
    out
}

/// Run the configured experiment and write `results.csv`, `records.jsonl`
/// and one trace per successful run under `output_dir`.
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let instances = cfg.load_instances()?;
    let prepared: Vec<PreparedInstance> = instances
        .into_par_iter()
        .enumerate()
        .map(|(i, (id, inst))| prepare(id, i, inst, cfg.seed))
        .collect::<Result<_>>()?;
    let mut algorithms = cfg.algorithms.clone();
    algorithms.sort();
    algorithms.dedup();
    let tasks: Vec<(&PreparedInstance, Algorithm)> = prepared
        .iter()
        .flat_map(|p| algorithms.iter().map(move |&a| (p, a)))
        .collect();
    let results: Vec<TaskOutput> = tasks
        .par_iter()
        .map(|&(prep, alg)| run_task(prep, alg, cfg))
        .collect();

    let out_dir = &cfg.output_dir;
    std::fs::create_dir_all(out_dir.join("traces")).map_err(BenchError::io(out_dir))?;
    let mut outcome = RunOutcome::default();
    let mut timed = Vec::new();
    for (rec, trace) in results.into_iter().flatten() {
        if let Some(t) = trace {
            let path = out_dir.join(&rec.record.trace_file);
            std::fs::write(&path, t.to_json()?).map_err(BenchError::io(&path))?;
            let alg = Algorithm::parse(&rec.record.algorithm)?;
            outcome.traces.insert((rec.record.instance_id.clone(), alg, rec.record.p), t);
        }
        timed.push(rec);
    }
    timed.sort_by(|a, b| {
        (&a.record.instance_id, &a.record.algorithm, a.record.p)
            .cmp(&(&b.record.instance_id, &b.record.algorithm, b.record.p))
    });
    outcome.records = timed.iter().map(|t| t.record.clone()).collect();
    write_csv(&out_dir.join("results.csv"), RECORD_HEADER, &outcome.records)?;
    write_jsonl(&out_dir.join("records.jsonl"), &timed)?;
    Ok(outcome)
}

fn write_jsonl(path: &Path, rows: &[TimedRecord]) -> Result<()> {
    let mut text = String::new();
    for r in rows {
        text.push_str(&serde_json::to_string(r)?);
        text.push('\n');
    }
    std::fs::write(path, text).map_err(BenchError::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quota() {
        assert_eq!(per_slice_quota(10_000, 2), 100);
        assert_eq!(per_slice_quota(10_000, 3), 22);
        assert_eq!(per_slice_quota(10_000, 1), 10_000);
        assert_eq!(per_slice_quota(1, 4), 1);
    }

    #[test]
    fn header_matches_fields() {
        let prep = prepare(
            "x".into(),
            0,
            VrpInstance::new(vec![(0, 0), (3, 4)], 1, None).unwrap(),
            0,
        )
        .unwrap();
        let rec = base_record(&prep, Algorithm::Qaoa, 1, &ExperimentConfig::default());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&rec).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), RECORD_HEADER.join(","));
    }
}
