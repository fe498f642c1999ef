//! Hamiltonian slicing for variational quantum optimization.
//!
//! A QUBO or Ising objective is split into classically separable
//! sub-Hamiltonians ("slices") plus a residual term group that is only ever
//! evaluated classically. Each slice runs as an independent QAOA circuit on a
//! small statevector; slice samples are glued back together by Cartesian
//! product and scored against the full objective.
//!
//! Bit order is fixed crate-wide: variable / qubit `k` is bit `k` of a basis
//! index (qubit 0 is the least-significant bit).

pub mod error;
pub mod instances;
pub mod model;
pub mod rng;
pub mod sim;
pub mod slicing;
pub mod trainer;

pub use error::{Error, Result};
