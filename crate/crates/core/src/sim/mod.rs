//! Dense statevector simulation of QAOA and hardware-efficient circuits.
//!
//! Qubit `k` is bit `k` of the basis index. Sampled bitstrings use the same
//! convention, so slice samples scatter directly into global assignments.

mod diag;
mod hea;
mod oracle;
mod params;
mod sample;
mod statevector;

pub use diag::DiagonalHamiltonian;
pub use hea::{run_hea, Entangler, HeaParams};
pub use oracle::{dense_oracle, AnsatzParams, DENSE_ORACLE_CAP};
pub use params::QaoaParams;
pub use sample::{sample, SampleSet};
pub use statevector::{exact_expectation, exact_variance, init_plus, run_qaoa, Statevector};

/// Largest statevector the simulator will allocate.
pub const SIM_QUBIT_CAP: usize = 26;

/// Fan out over amplitudes only for states at least this wide.
pub(crate) const PARALLEL_QUBITS: usize = 14;
