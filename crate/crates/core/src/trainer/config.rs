use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::SIM_QUBIT_CAP;

use super::RECOMBINE_CAP;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerKind {
    #[default]
    NelderMead,
    Spsa,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleInit {
    /// All angles zero: the circuit starts as the uniform superposition.
    #[default]
    Zeros,
    /// Each angle drawn from `U(0, π)`.
    UniformRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainingConfig {
    pub optimizer: OptimizerKind,
    pub max_iters: usize,
    /// Shots per objective evaluation; `None` means `10^{p+1}`.
    pub shots_per_eval: Option<u64>,
    /// Subsamples kept per slice before recombination.
    pub subsamples_per_slice: usize,
    pub seed: u64,
    /// Stop when the simplex objective spread falls below this.
    pub convergence_tol: f64,
    pub angle_init: AngleInit,
    /// Edge length of the initial Nelder-Mead simplex, radians.
    pub initial_step: f64,
    /// Re-evaluate the incumbent every this many iterations (0 disables).
    pub reevaluate_every: usize,
    /// Cap on the size of a recombined sample multiset.
    pub recombine_cap: u128,
    /// Single-slice mode: repeat one subsample `k` times instead of drawing
    /// an independent subsample per factor.
    pub reuse_single_subsample: bool,
    /// Widest statevector a trainer may allocate.
    pub max_qubits: usize,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            optimizer: OptimizerKind::NelderMead,
            max_iters: 100,
            shots_per_eval: None,
            subsamples_per_slice: 100,
            seed: 0,
            convergence_tol: 1e-6,
            angle_init: AngleInit::Zeros,
            initial_step: 0.25,
            reevaluate_every: 10,
            recombine_cap: RECOMBINE_CAP,
            reuse_single_subsample: false,
            max_qubits: SIM_QUBIT_CAP,
        }
    }
}

impl TrainingConfig {
    /// `10^{p+1}` unless overridden.
    pub fn shots(&self, p: usize) -> u64 {
        self.shots_per_eval
            .unwrap_or_else(|| 10u64.saturating_pow(p as u32 + 1))
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        let bad = |msg: &str| Err(Error::Validation(msg.to_string()));
        if p == 0 {
            return bad("p must be at least 1");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        if self.shots(p) == 0 {
            return bad("shots_per_eval must be positive");
        }
        if self.subsamples_per_slice == 0 {
            return bad("subsamples_per_slice must be positive");
        }
        if self.subsamples_per_slice as u64 > self.shots(p) {
            return bad("subsamples_per_slice exceeds shots_per_eval");
        }
        if !(self.convergence_tol > 0.0 && self.initial_step > 0.0) {
            return bad("tolerances and step sizes must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_shot_schedule() {
        let c = TrainingConfig::default();
        assert_eq!(c.shots(1), 100);
        assert_eq!(c.shots(3), 10_000);
        assert!(c.validate(1).is_ok());
        assert!(c.validate(0).is_err());
    }

    #[test]
    fn subsamples_bounded_by_shots() {
        let c = TrainingConfig {
            shots_per_eval: Some(50),
            ..TrainingConfig::default()
        };
        assert!(c.validate(1).is_err());
    }
}
