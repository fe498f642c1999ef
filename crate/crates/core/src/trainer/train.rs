use std::cell::RefCell;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CompiledModel, QuboModel};
use crate::rng::{derive_seed, rng_for};
use crate::sim::{
    exact_expectation, run_qaoa, sample, DiagonalHamiltonian, QaoaParams, SampleSet,
};
use crate::slicing::SliceDecomposition;

use super::{
    minimize, product_expectation, recombine, stream, subsample, AngleInit, AngleSet,
    TrainingConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrainingMode {
    Qaoa,
    MultiAngle,
    SingleSlice,
    MultiObjective,
}

/// One optimizer iteration as recorded in a trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Incumbent angles, flat layout of the trace's `AngleSet`.
    pub angles: Vec<f64>,
    pub objective: f64,
    pub best_objective: f64,
    /// Objective evaluations so far; evaluation `e` of slice `a` sampled
    /// with seed `derive_seed(seed, [1, a, e])` and subsampled with
    /// `derive_seed(seed, [2, a, e])`.
    pub evaluations: usize,
    /// Circuit shots consumed so far.
    pub shots: u64,
}

/// Full record of one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingTrace {
    pub mode: TrainingMode,
    pub p: usize,
    /// Number of slices (1 for plain QAOA).
    pub k: usize,
    pub seed: u64,
    pub shots_per_eval: u64,
    pub subsamples_per_slice: Option<usize>,
    /// Global samples scored per evaluation.
    pub scored_samples_per_eval: u64,
    /// Width of the widest statevector allocated.
    pub qubits_allocated: usize,
    pub initial_angles: AngleSet,
    pub initial_objective: f64,
    /// Noise-free objective at the initial angles.
    pub initial_exact_objective: f64,
    pub iterations: Vec<IterationRecord>,
    /// Raw best angles; use these for replay.
    pub best_angles: AngleSet,
    /// `best_angles` reduced into `[0, 2π)`, for display.
    pub best_angles_reduced: AngleSet,
    pub best_objective: f64,
    pub best_exact_objective: f64,
    pub converged: bool,
    pub evaluations: usize,
    pub total_shots: u64,
    /// Pareto front of each evaluation (multi-objective runs only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fronts: Option<Vec<Vec<Vec<f64>>>>,
}

impl TrainingTrace {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Count-weighted mean energy of a sample multiset under `model`.
pub fn objective_mean_energy(samples: &SampleSet, model: &QuboModel) -> Result<f64> {
    if samples.num_bits() != model.num_vars() {
        return Err(Error::Dimension {
            expected: model.num_vars(),
            got: samples.num_bits(),
        });
    }
    let compiled = model.compile();
    samples.mean_by(|z| compiled.energy(z))
}

fn check_cap(n: usize, config: &TrainingConfig, hint: &str) -> Result<()> {
    if n > config.max_qubits {
        return Err(Error::Size {
            what: if hint.is_empty() {
                "statevector"
            } else {
                "statevector (use a sliced trainer)"
            },
            size: n,
            cap: config.max_qubits,
        });
    }
    Ok(())
}

pub(crate) fn initial_angles(shape: AngleSet, config: &TrainingConfig) -> Result<AngleSet> {
    match config.angle_init {
        AngleInit::Zeros => Ok(shape),
        AngleInit::UniformRandom => {
            let mut rng = rng_for(config.seed, &[stream::INIT]);
            let flat: Vec<f64> = (0..shape.num_params())
                .map(|_| rng.random_range(0.0..std::f64::consts::PI))
                .collect();
            shape.with_flat(&flat)
        }
    }
}

/// QAOA on a single register: sample the circuit, score the samples.
pub struct QaoaObjective {
    diag: DiagonalHamiltonian,
    shots: u64,
    seed: u64,
}

impl QaoaObjective {
    pub fn new(circuit_model: &QuboModel, shots: u64, seed: u64) -> Result<Self> {
        Ok(Self {
            diag: DiagonalHamiltonian::from_model(circuit_model)?,
            shots,
            seed,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.diag.num_qubits()
    }

    pub fn diagonal(&self) -> &DiagonalHamiltonian {
        &self.diag
    }

    /// Samples drawn at evaluation `eval`.
    pub fn samples(&self, params: &QaoaParams, eval: u64) -> Result<SampleSet> {
        let state = run_qaoa(&self.diag, params)?;
        sample(
            &state,
            self.shots,
            derive_seed(self.seed, &[stream::SAMPLE, 0, eval]),
        )
    }

    /// Mean circuit-model energy of the samples at evaluation `eval`.
    pub fn evaluate(&self, params: &QaoaParams, eval: u64) -> Result<f64> {
        self.samples(params, eval)?
            .mean_by(|z| self.diag.energy(z))
    }

    /// `⟨ψ(params)|H|ψ(params)⟩`.
    pub fn exact(&self, params: &QaoaParams) -> Result<f64> {
        exact_expectation(&run_qaoa(&self.diag, params)?, &self.diag)
    }
}

struct SlicePart {
    model: QuboModel,
    diag: DiagonalHamiltonian,
}

/// Parallel QAOA objective over a slice decomposition.
///
/// Multi-angle mode simulates every slice with its own angles. Single-slice
/// mode simulates slice 0 only and reuses its samples for every slice
/// through the label alignment. Either way the recombined global samples
/// are scored with the full source model, residual included.
pub struct PqaoaObjective {
    mode: TrainingMode,
    k: usize,
    parts: Vec<SlicePart>,
    /// Single-slice mode: global variables of slice-0 bit `j` in slice `a`.
    aligned_maps: Vec<Vec<usize>>,
    full: QuboModel,
    compiled: CompiledModel,
    shots: u64,
    m: usize,
    seed: u64,
    cap: u128,
    reuse: bool,
}

impl PqaoaObjective {
    pub fn multi_angle(d: &SliceDecomposition, p: usize, config: &TrainingConfig) -> Result<Self> {
        Self::build(d, p, config, TrainingMode::MultiAngle)
    }

    pub fn single_slice(d: &SliceDecomposition, p: usize, config: &TrainingConfig) -> Result<Self> {
        if !crate::slicing::slices_identical(d) {
            return Err(Error::Precondition(
                "single-slice training needs identical slices".into(),
            ));
        }
        Self::build(d, p, config, TrainingMode::SingleSlice)
    }

    fn build(
        d: &SliceDecomposition,
        p: usize,
        config: &TrainingConfig,
        mode: TrainingMode,
    ) -> Result<Self> {
        config.validate(p)?;
        if d.k() == 0 {
            return Err(Error::Empty("slices"));
        }
        let simulated = match mode {
            TrainingMode::SingleSlice => &d.slices()[..1],
            _ => d.slices(),
        };
        for s in simulated {
            check_cap(s.num_vars(), config, "")?;
        }
        let parts = simulated
            .iter()
            .map(|s| {
                Ok(SlicePart {
                    model: s.model.clone(),
                    diag: DiagonalHamiltonian::from_model(&s.model)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let aligned_maps = match mode {
            TrainingMode::SingleSlice => {
                let perms = d.alignment().ok_or_else(|| {
                    Error::Precondition("slices cannot be aligned".into())
                })?;
                d.slices()
                    .iter()
                    .zip(&perms)
                    .map(|(s, perm)| perm.iter().map(|&k| s.index_map[k]).collect())
                    .collect()
            }
            _ => d.index_maps(),
        };
        let full = d.source().clone();
        Ok(Self {
            mode,
            k: d.k(),
            parts,
            aligned_maps,
            compiled: full.compile(),
            full,
            shots: config.shots(p),
            m: config.subsamples_per_slice,
            seed: config.seed,
            cap: config.recombine_cap,
            reuse: config.reuse_single_subsample,
        })
    }

    pub fn mode(&self) -> TrainingMode {
        self.mode
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Width of the widest simulated register.
    pub fn qubits_allocated(&self) -> usize {
        self.parts.iter().map(|p| p.diag.num_qubits()).max().unwrap_or(0)
    }

    /// Statevectors simulated per evaluation.
    pub fn circuits_per_eval(&self) -> usize {
        self.parts.len()
    }

    /// Global samples scored per evaluation.
    pub fn scored_samples_per_eval(&self) -> u64 {
        if self.k == 1 {
            self.shots
        } else {
            (self.m as u64).min(self.shots).pow(self.k as u32)
        }
    }

    fn shape(&self, p: usize) -> Result<AngleSet> {
        match self.mode {
            TrainingMode::MultiAngle => AngleSet::multi_zeros(self.k, p),
            _ => AngleSet::shared_zeros(p),
        }
    }

    fn check_shape(&self, angles: &AngleSet) -> Result<()> {
        let expected = match self.mode {
            TrainingMode::MultiAngle => self.k,
            _ => 1,
        };
        if angles.blocks() != expected {
            return Err(Error::Arity {
                expected,
                got: angles.blocks(),
            });
        }
        Ok(())
    }

    fn slice_samples(&self, a: usize, params: &QaoaParams, eval: u64) -> Result<SampleSet> {
        let state = run_qaoa(&self.parts[a].diag, params)?;
        sample(
            &state,
            self.shots,
            derive_seed(self.seed, &[stream::SAMPLE, a as u64, eval]),
        )
    }

    fn subsample_for(&self, part: usize, factor: usize, raw: &SampleSet, eval: u64) -> Result<SampleSet> {
        let mut rng = rng_for(self.seed, &[stream::SUBSAMPLE, factor as u64, eval]);
        subsample(raw, &self.parts[part].model, self.m, &mut rng)
    }

    /// Recombined global samples of evaluation `eval`.
    pub fn recombined_samples(&self, angles: &AngleSet, eval: u64) -> Result<SampleSet> {
        self.check_shape(angles)?;
        let n = self.full.num_vars();
        if self.k == 1 {
            let raw = self.slice_samples(0, angles.for_slice(0), eval)?;
            return recombine(&[raw], &self.aligned_maps, n, self.cap);
        }
        let factors: Vec<SampleSet> = match self.mode {
            TrainingMode::SingleSlice => {
                let raw = self.slice_samples(0, angles.for_slice(0), eval)?;
                if self.reuse {
                    vec![self.subsample_for(0, 0, &raw, eval)?; self.k]
                } else {
                    (0..self.k)
                        .into_par_iter()
                        .map(|a| self.subsample_for(0, a, &raw, eval))
                        .collect::<Result<_>>()?
                }
            }
            _ => (0..self.k)
                .into_par_iter()
                .map(|a| {
                    let raw = self.slice_samples(a, angles.for_slice(a), eval)?;
                    self.subsample_for(a, a, &raw, eval)
                })
                .collect::<Result<_>>()?,
        };
        recombine(&factors, &self.aligned_maps, n, self.cap)
    }

    /// Mean full-model energy of the recombined samples.
    pub fn evaluate(&self, angles: &AngleSet, eval: u64) -> Result<f64> {
        self.recombined_samples(angles, eval)?
            .mean_by(|z| self.compiled.energy(z))
    }

    /// Full-model expectation under the product of the exact slice output
    /// distributions (no sampling or subsampling).
    pub fn exact(&self, angles: &AngleSet) -> Result<f64> {
        self.check_shape(angles)?;
        let probs: Vec<Vec<f64>> = (0..self.parts.len())
            .map(|a| Ok(run_qaoa(&self.parts[a].diag, angles.for_slice(a))?.probabilities()))
            .collect::<Result<_>>()?;
        let dist: Vec<(Vec<usize>, Vec<f64>)> = self
            .aligned_maps
            .iter()
            .enumerate()
            .map(|(a, map)| {
                let source = if self.mode == TrainingMode::SingleSlice { 0 } else { a };
                (map.clone(), probs[source].clone())
            })
            .collect();
        product_expectation(&self.full, &dist)
    }
}

struct RunSpec {
    mode: TrainingMode,
    k: usize,
    shots_per_eval: u64,
    subsamples_per_slice: Option<usize>,
    scored_samples_per_eval: u64,
    qubits_allocated: usize,
    circuits_per_eval: usize,
}

/// Drive the optimizer over a stochastic objective.
fn run_training(
    spec: RunSpec,
    init: AngleSet,
    config: &TrainingConfig,
    mut evaluate: impl FnMut(&AngleSet, u64) -> Result<f64>,
    exact: impl Fn(&AngleSet) -> Result<f64>,
) -> Result<TrainingTrace> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let mut eval = 0u64;
    let objective = |flat: &[f64]| -> f64 {
        let index = eval;
        eval += 1;
        match init.with_flat(flat).and_then(|a| evaluate(&a, index)) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let result = match minimize(objective, &init.to_flat(), config) {
        Ok(r) => r,
        Err(abort) => {
            return Err(failure.into_inner().unwrap_or_else(|| abort.into()));
        }
    };
    let shots_per_eval_total = spec.shots_per_eval * spec.circuits_per_eval as u64;
    let iterations = result
        .steps
        .iter()
        .map(|s| IterationRecord {
            iteration: s.iteration,
            angles: s.x.clone(),
            objective: s.value,
            best_objective: s.best_value,
            evaluations: s.evaluations,
            shots: s.evaluations as u64 * shots_per_eval_total,
        })
        .collect();
    let best_angles = init.with_flat(&result.x_best)?;
    Ok(TrainingTrace {
        mode: spec.mode,
        p: init.p(),
        k: spec.k,
        seed: config.seed,
        shots_per_eval: spec.shots_per_eval,
        subsamples_per_slice: spec.subsamples_per_slice,
        scored_samples_per_eval: spec.scored_samples_per_eval,
        qubits_allocated: spec.qubits_allocated,
        initial_exact_objective: exact(&init)?,
        initial_angles: init,
        initial_objective: result.initial_value,
        iterations,
        best_angles_reduced: best_angles.reduced(),
        best_exact_objective: exact(&best_angles)?,
        best_angles,
        best_objective: result.f_best,
        converged: result.converged,
        evaluations: result.evaluations,
        total_shots: result.evaluations as u64 * shots_per_eval_total,
        fronts: None,
    })
}

/// QAOA on `circuit_model` with a caller-supplied score of each evaluation's
/// samples. `init` fixes `p` and the starting angles (e.g. a warm start).
pub fn train_qaoa_scored(
    circuit_model: &QuboModel,
    init: &AngleSet,
    config: &TrainingConfig,
    mut score: impl FnMut(&SampleSet) -> Result<f64>,
) -> Result<TrainingTrace> {
    let AngleSet::Shared(_) = init else {
        return Err(Error::Validation("QAOA takes shared angles".into()));
    };
    let p = init.p();
    config.validate(p)?;
    check_cap(circuit_model.num_vars(), config, "sliced")?;
    let objective = QaoaObjective::new(circuit_model, config.shots(p), config.seed)?;
    let spec = RunSpec {
        mode: TrainingMode::Qaoa,
        k: 1,
        shots_per_eval: config.shots(p),
        subsamples_per_slice: None,
        scored_samples_per_eval: config.shots(p),
        qubits_allocated: objective.num_qubits(),
        circuits_per_eval: 1,
    };
    run_training(
        spec,
        init.clone(),
        config,
        |a, eval| score(&objective.samples(a.for_slice(0), eval)?),
        |a| objective.exact(a.for_slice(0)),
    )
}

/// Vanilla QAOA: `2p` shared angles, objective = mean sampled energy.
pub fn train_qaoa(full_model: &QuboModel, p: usize, config: &TrainingConfig) -> Result<TrainingTrace> {
    config.validate(p)?;
    let init = initial_angles(AngleSet::shared_zeros(p)?, config)?;
    train_qaoa_from(full_model, &init, config)
}

/// [`train_qaoa`] from given starting angles.
pub fn train_qaoa_from(
    full_model: &QuboModel,
    init: &AngleSet,
    config: &TrainingConfig,
) -> Result<TrainingTrace> {
    check_cap(full_model.num_vars(), config, "sliced")?;
    let diag = DiagonalHamiltonian::from_model(full_model)?;
    train_qaoa_scored(full_model, init, config, |s| s.mean_by(|z| diag.energy(z)))
}

fn train_pqaoa(objective: PqaoaObjective, init: AngleSet, config: &TrainingConfig) -> Result<TrainingTrace> {
    let spec = RunSpec {
        mode: objective.mode(),
        k: objective.k(),
        shots_per_eval: config.shots(init.p()),
        subsamples_per_slice: (objective.k() > 1).then_some(config.subsamples_per_slice),
        scored_samples_per_eval: objective.scored_samples_per_eval(),
        qubits_allocated: objective.qubits_allocated(),
        circuits_per_eval: objective.circuits_per_eval(),
    };
    run_training(
        spec,
        init,
        config,
        |a, eval| objective.evaluate(a, eval),
        |a| objective.exact(a),
    )
}

/// Parallel QAOA with independent angles per slice (`2kp` parameters).
pub fn train_multi_angle_pqaoa(
    d: &SliceDecomposition,
    p: usize,
    config: &TrainingConfig,
) -> Result<TrainingTrace> {
    let objective = PqaoaObjective::multi_angle(d, p, config)?;
    let init = initial_angles(objective.shape(p)?, config)?;
    train_pqaoa(objective, init, config)
}

pub fn train_multi_angle_pqaoa_from(
    d: &SliceDecomposition,
    init: &AngleSet,
    config: &TrainingConfig,
) -> Result<TrainingTrace> {
    let objective = PqaoaObjective::multi_angle(d, init.p(), config)?;
    objective.check_shape(init)?;
    train_pqaoa(objective, init.clone(), config)
}

/// Parallel QAOA simulating one slice and reusing its samples for all `k`
/// identical slices (`2p` parameters, one slice's qubits).
pub fn train_single_slice_pqaoa(
    d: &SliceDecomposition,
    p: usize,
    config: &TrainingConfig,
) -> Result<TrainingTrace> {
    let objective = PqaoaObjective::single_slice(d, p, config)?;
    let init = initial_angles(objective.shape(p)?, config)?;
    train_pqaoa(objective, init, config)
}

pub fn train_single_slice_pqaoa_from(
    d: &SliceDecomposition,
    init: &AngleSet,
    config: &TrainingConfig,
) -> Result<TrainingTrace> {
    let objective = PqaoaObjective::single_slice(d, init.p(), config)?;
    objective.check_shape(init)?;
    train_pqaoa(objective, init.clone(), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::random::random_dense;
    use crate::model::{build_vrp_qubo, Binary, TagId, VrpInstance};
    use crate::slicing::decompose;
    use std::collections::BTreeSet;

    fn vrp(n_customers: usize) -> QuboModel {
        let coords = [(0, 0), (3, 4), (-2, 5), (6, -1)];
        let inst = VrpInstance::new(coords[..=n_customers].to_vec(), 2, None).unwrap();
        build_vrp_qubo(&inst).unwrap()
    }

    fn split(model: &QuboModel) -> SliceDecomposition {
        decompose(model, &BTreeSet::from([TagId::Coupling])).unwrap()
    }

    fn quick(max_iters: usize) -> TrainingConfig {
        TrainingConfig {
            max_iters,
            seed: 11,
            ..TrainingConfig::default()
        }
    }

    #[test]
    fn mean_energy_examples() {
        let mut m = QuboModel::new(2);
        m.add_linear(TagId::Objective, 0, 2.0).unwrap();
        m.add_linear(TagId::Objective, 1, 3.0).unwrap();
        let s = SampleSet::from_draws(2, [0b01, 0b01, 0b11]).unwrap();
        assert_eq!(objective_mean_energy(&s, &m).unwrap(), 3.0);
        let same = SampleSet::from_draws(2, [0b10; 4]).unwrap();
        assert_eq!(objective_mean_energy(&same, &m).unwrap(), 3.0);
        assert!(objective_mean_energy(&SampleSet::new(2), &m).is_err());
        assert!(objective_mean_energy(&SampleSet::new(3), &m).is_err());
    }

    #[test]
    fn one_qubit_never_worsens() {
        let mut m = QuboModel::new(1);
        // Ising h = 1 on one spin: E(x) = 1 − 2x, mean 0 at zero angles.
        m.add_offset(TagId::Objective, 1.0).unwrap();
        m.add_linear(TagId::Objective, 0, -2.0).unwrap();
        let t = train_qaoa(&m, 1, &quick(30)).unwrap();
        assert!(t.best_objective <= t.initial_objective);
        assert_eq!(t.initial_exact_objective, 0.0);
        assert!(t.iterations.len() <= 30);
        assert_eq!(t.best_angles.num_params(), 2);
    }

    #[test]
    fn trace_json_round_trip() {
        let t = train_qaoa(&vrp(1), 1, &quick(5)).unwrap();
        let back = TrainingTrace::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn deterministic_per_seed() {
        let m = vrp(1);
        let a = train_qaoa(&m, 2, &quick(15)).unwrap();
        let b = train_qaoa(&m, 2, &quick(15)).unwrap();
        assert_eq!(a, b);
        let c = train_qaoa(&m, 2, &TrainingConfig { seed: 12, ..quick(15) }).unwrap();
        assert_ne!(a.iterations, c.iterations);
    }

    #[test]
    fn oversized_model_is_rejected() {
        let cfg = TrainingConfig {
            max_qubits: 4,
            ..quick(3)
        };
        assert!(matches!(train_qaoa(&vrp(1), 1, &cfg), Err(Error::Size { .. })));
    }

    #[test]
    fn multi_angle_shape_and_sample_count() {
        let d = split(&vrp(2));
        assert_eq!(d.k(), 2);
        let cfg = quick(3);
        let obj = PqaoaObjective::multi_angle(&d, 3, &cfg).unwrap();
        assert_eq!(obj.shape(3).unwrap().num_params(), 12);
        assert_eq!(obj.qubits_allocated(), 9);
        let angles = AngleSet::multi_zeros(2, 1).unwrap();
        let obj = PqaoaObjective::multi_angle(&d, 1, &cfg).unwrap();
        assert_eq!(obj.recombined_samples(&angles, 0).unwrap().shots(), 10_000);
    }

    #[test]
    fn single_slice_uses_one_register() {
        let d = split(&vrp(2));
        let t = train_single_slice_pqaoa(&d, 1, &quick(4)).unwrap();
        assert_eq!(t.qubits_allocated, 9);
        assert_eq!(t.scored_samples_per_eval, 10_000);
        assert_eq!(t.best_angles.num_params(), 2);
    }

    #[test]
    fn single_slice_requires_identical_slices() {
        let mut m = QuboModel::new(4);
        m.add_quadratic(TagId::Objective, 0, 1, 1.0).unwrap();
        m.add_quadratic(TagId::Objective, 2, 3, 2.0).unwrap();
        let d = decompose(&m, &BTreeSet::new()).unwrap();
        assert!(matches!(
            train_single_slice_pqaoa(&d, 1, &quick(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_slice_with_one_slice_is_plain_qaoa() {
        let mut rng = rng_for(4, &[]);
        let model = random_dense::<Binary, _>(4, &mut rng);
        let d = decompose(&model, &BTreeSet::new()).unwrap();
        assert_eq!(d.k(), 1);
        let cfg = quick(12);
        let sliced = train_single_slice_pqaoa(&d, 2, &cfg).unwrap();
        let plain = train_qaoa(&d.slices()[0].model, 2, &cfg).unwrap();
        assert_eq!(sliced.iterations, plain.iterations);
        assert_eq!(sliced.best_objective, plain.best_objective);
    }

    #[test]
    fn warm_start_identity_layer_is_exact() {
        let m = vrp(1);
        let cfg = quick(20);
        let t1 = train_qaoa(&m, 1, &cfg).unwrap();
        let t2 = train_qaoa_from(&m, &t1.best_angles.extended(), &cfg).unwrap();
        assert_eq!(t2.initial_exact_objective, t1.best_exact_objective);

        let d = split(&vrp(2));
        let cfg = TrainingConfig { shots_per_eval: Some(200), ..quick(6) };
        let m1 = train_multi_angle_pqaoa(&d, 1, &cfg).unwrap();
        let m2 = train_multi_angle_pqaoa_from(&d, &m1.best_angles.extended(), &cfg).unwrap();
        assert_eq!(m2.initial_exact_objective, m1.best_exact_objective);
    }

    #[test]
    fn zero_angles_sample_the_uniform_mean() {
        // At zero angles each slice is uniform, so the recombined samples are
        // uniform over the product space.
        let model = vrp(1);
        let d = split(&model);
        let cfg = TrainingConfig {
            shots_per_eval: Some(1000),
            subsamples_per_slice: 1000,
            ..quick(1)
        };
        let obj = PqaoaObjective::multi_angle(&d, 1, &cfg).unwrap();
        let angles = AngleSet::multi_zeros(2, 1).unwrap();
        let n = model.num_vars();
        let exhaustive: f64 = (0..1u64 << n)
            .map(|z| model.evaluate(&crate::model::Assignment::from_index(z, n)).unwrap())
            .sum::<f64>()
            / (1u64 << n) as f64;
        assert!((obj.exact(&angles).unwrap() - exhaustive).abs() < 1e-9);
        // With m = shots no feasibility filtering happens.
        let sampled = obj.evaluate(&angles, 0).unwrap();
        let compiled = model.compile();
        let var = (0..1u64 << n)
            .map(|z| (compiled.energy(z) - exhaustive).powi(2))
            .sum::<f64>()
            / (1u64 << n) as f64;
        // Effective sample size is the slice shot count, not the product.
        let se = (var / 1000.0).sqrt();
        assert!((sampled - exhaustive).abs() < 5.0 * se);
    }
}
