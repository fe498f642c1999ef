//! Random routing instances and classical reference solvers.
//!
//! A plan gives every vehicle a sequence of `n + 1` locations, one per step,
//! and costs `Σ_s w(loc_s, loc_{s+1}) / W`; each customer appears exactly once
//! across all sequences and the depot fills every other slot.

mod baseline;
mod generate;

pub use baseline::{
    approximation_ratio, encode_plan, heuristic_baseline, plan_cost, route_enum_optimal,
    BaselineMethod, BaselineResult, ROUTE_ENUM_MAX_N,
};
pub use generate::{generate_vrp, GeneratorConfig};
