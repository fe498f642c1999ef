use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Domain, Model};

use super::SIM_QUBIT_CAP;

/// Energies of every basis state of a diagonal Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    n: usize,
    energies: Vec<f64>,
}

impl DiagonalHamiltonian {
    /// Tabulate `energies[z] = evaluate(model, bits(z))`.
    pub fn from_model<D: Domain>(model: &Model<D>) -> Result<Self> {
        let n = model.num_vars();
        check_width(n)?;
        let compiled = model.compile();
        let energies = (0..1u64 << n)
            .into_par_iter()
            .map(|z| compiled.energy(z))
            .collect();
        Ok(Self { n, energies })
    }

    pub fn from_energies(energies: Vec<f64>) -> Result<Self> {
        let len = energies.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::Validation(format!(
                "energy table length {len} is not 2^n with n >= 1"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_width(n)?;
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Validation("non-finite energy".into()));
        }
        Ok(Self { n, energies })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, z: u64) -> f64 {
        self.energies[z as usize]
    }
}

pub(crate) fn check_width(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Validation("need at least one qubit".into()));
    }
    if n > SIM_QUBIT_CAP {
        return Err(Error::Size {
            what: "statevector qubit count",
            size: n,
            cap: SIM_QUBIT_CAP,
        });
    }
    Ok(())
}
