use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// QAOA angles: `gamma[l]` drives the phase separator and `beta[l]` the
/// mixer of layer `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    gamma: Vec<f64>,
    beta: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::Validation("QAOA needs at least one layer".into()));
        }
        if gamma.len() != beta.len() {
            return Err(Error::Arity {
                expected: gamma.len(),
                got: beta.len(),
            });
        }
        Ok(Self { gamma, beta })
    }

    pub fn zeros(p: usize) -> Result<Self> {
        Self::new(vec![0.0; p], vec![0.0; p])
    }

    /// From the flat layout `[γ_1..γ_p, β_1..β_p]`.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::Validation("flat QAOA vector has odd length".into()));
        }
        let (g, b) = flat.split_at(flat.len() / 2);
        Self::new(g.to_vec(), b.to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// The same circuit with one extra identity layer `(0, 0)` appended.
    pub fn extended(&self) -> Self {
        let mut out = self.clone();
        out.gamma.push(0.0);
        out.beta.push(0.0);
        out
    }
}
