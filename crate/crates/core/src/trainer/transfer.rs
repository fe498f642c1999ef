use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::approximation_ratio;
use crate::model::QuboModel;
use crate::rng::derive_seed;
use crate::sim::{run_qaoa, sample, DiagonalHamiltonian, QaoaParams, SIM_QUBIT_CAP};

use super::{stream, TrainingTrace};

/// Full-model QAOA run with one trained angle block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferSource {
    /// Slice whose angles were used (0 for shared angles).
    pub source: usize,
    pub angles: QaoaParams,
    pub mean_energy: f64,
    pub best_energy: f64,
    /// `optimal / mean_energy`.
    pub ratio: f64,
    /// `optimal / best_energy`.
    pub best_sample_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferResult {
    pub sources: Vec<TransferSource>,
    /// Index into `sources` of the highest ratio (first on ties).
    pub best: usize,
}

impl TransferResult {
    pub fn best_source(&self) -> &TransferSource {
        &self.sources[self.best]
    }
}

/// Run full-model QAOA with each trained angle block and sample it.
pub fn transfer_evaluate(
    full_model: &QuboModel,
    trained: &TrainingTrace,
    shots: u64,
    seed: u64,
    optimal_energy: f64,
) -> Result<TransferResult> {
    if full_model.num_vars() > SIM_QUBIT_CAP {
        return Err(Error::Size {
            what: "statevector",
            size: full_model.num_vars(),
            cap: SIM_QUBIT_CAP,
        });
    }
    let diag = DiagonalHamiltonian::from_model(full_model)?;
    let mut sources = Vec::new();
    for (a, params) in trained.best_angles.sources().into_iter().enumerate() {
        let state = run_qaoa(&diag, params)?;
        let samples = sample(&state, shots, derive_seed(seed, &[stream::TRANSFER, a as u64]))?;
        let mean_energy = samples.mean_by(|z| diag.energy(z))?;
        let (_, best_energy) = samples.min_by(|z| diag.energy(z))?;
        sources.push(TransferSource {
            source: a,
            angles: params.clone(),
            ratio: approximation_ratio(mean_energy, optimal_energy)?,
            best_sample_ratio: approximation_ratio(best_energy, optimal_energy)?,
            mean_energy,
            best_energy,
        });
    }
    let best = (0..sources.len())
        .fold(0, |b, i| if sources[i].ratio > sources[b].ratio { i } else { b });
    Ok(TransferResult { sources, best })
}
