//! Training loops for QAOA and parallel (sliced) QAOA, sample
//! recombination, feasibility-first subsampling, parameter transfer and the
//! multi-objective variant.

mod angles;
mod config;
mod exact;
mod multi_objective;
mod optimizer;
mod pareto;
mod recombine;
mod subsample;
mod train;
mod transfer;

pub use angles::AngleSet;
pub use config::{AngleInit, OptimizerKind, TrainingConfig};
pub use exact::product_expectation;
pub use multi_objective::{build_constraint_qubo, knee_point, train_multi_objective, ObjectiveFn};
pub use optimizer::{minimize, OptimizeAbort, OptimizeResult, OptimizerStep};
pub use pareto::{pareto_front, ObjectiveVector};
pub use recombine::{recombine, RECOMBINE_CAP};
pub use subsample::subsample;
pub use train::{
    objective_mean_energy, train_multi_angle_pqaoa, train_multi_angle_pqaoa_from, train_qaoa,
    train_qaoa_from, train_qaoa_scored, train_single_slice_pqaoa, train_single_slice_pqaoa_from,
    IterationRecord, PqaoaObjective, QaoaObjective, TrainingMode, TrainingTrace,
};
pub use transfer::{transfer_evaluate, TransferResult, TransferSource};

/// Stream identifiers for seed derivation.
pub(crate) mod stream {
    pub const SAMPLE: u64 = 1;
    pub const SUBSAMPLE: u64 = 2;
    pub const INIT: u64 = 3;
    pub const SPSA: u64 = 4;
    pub const TRANSFER: u64 = 5;
}
