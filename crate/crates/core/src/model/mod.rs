//! QUBO / Ising models with tagged term groups, problem builders,
//! basis conversion and exhaustive oracles.

mod assignment;
mod brute;
mod convert;
mod io;
mod maxcut;
mod poly;
pub mod random;
mod tag;
mod vrp;

pub use assignment::Assignment;
pub use brute::{brute_force_min, brute_force_min_with_cap, BruteForceResult, BRUTE_FORCE_CAP};
pub use convert::{ising_to_qubo, qubo_to_ising};
pub use io::ModelFile;
pub use maxcut::{build_maxcut_ising, MaxCutSign};
pub use poly::{Binary, CompiledModel, Domain, IsingModel, Model, QuboModel, Spin, TermGroup};
pub use tag::{TagId, VarLabel};
pub use vrp::{
    build_vrp_qubo, decode_vrp, feasible_for_slice, vrp_var, ConstraintId, RouteSolution,
    VrpInstance,
};

/// Evaluate any model on an assignment.
pub fn evaluate<D: Domain>(model: &Model<D>, x: &Assignment) -> crate::Result<f64> {
    model.evaluate(x)
}
