use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::QaoaParams;

/// Trainable QAOA angles.
///
/// Flat layout: `Shared` is `[γ_1..γ_p, β_1..β_p]`; `MultiAngle` concatenates
/// that block for each slice in slice order (slice-major, layer-minor), giving
/// `2·k·p` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "variant", content = "blocks")]
pub enum AngleSet {
    Shared(QaoaParams),
    MultiAngle(Vec<QaoaParams>),
}

impl AngleSet {
    pub fn shared_zeros(p: usize) -> Result<Self> {
        Ok(Self::Shared(QaoaParams::zeros(p)?))
    }

    pub fn multi_zeros(k: usize, p: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Validation("need at least one slice".into()));
        }
        Ok(Self::MultiAngle(vec![QaoaParams::zeros(p)?; k]))
    }

    pub fn p(&self) -> usize {
        match self {
            Self::Shared(q) => q.p(),
            Self::MultiAngle(v) => v[0].p(),
        }
    }

    /// Number of independent angle blocks (1 for `Shared`).
    pub fn blocks(&self) -> usize {
        match self {
            Self::Shared(_) => 1,
            Self::MultiAngle(v) => v.len(),
        }
    }

    pub fn num_params(&self) -> usize {
        2 * self.p() * self.blocks()
    }

    pub fn to_flat(&self) -> Vec<f64> {
        match self {
            Self::Shared(q) => q.to_flat(),
            Self::MultiAngle(v) => v.iter().flat_map(QaoaParams::to_flat).collect(),
        }
    }

    /// Rebuild a set of the same shape from a flat vector.
    pub fn with_flat(&self, flat: &[f64]) -> Result<Self> {
        if flat.len() != self.num_params() {
            return Err(Error::Arity {
                expected: self.num_params(),
                got: flat.len(),
            });
        }
        Ok(match self {
            Self::Shared(_) => Self::Shared(QaoaParams::from_flat(flat)?),
            Self::MultiAngle(v) => Self::MultiAngle(
                flat.chunks(2 * self.p())
                    .take(v.len())
                    .map(QaoaParams::from_flat)
                    .collect::<Result<_>>()?,
            ),
        })
    }

    /// Parameters driving slice `a` (every slice for `Shared`).
    pub fn for_slice(&self, a: usize) -> &QaoaParams {
        match self {
            Self::Shared(q) => q,
            Self::MultiAngle(v) => &v[a],
        }
    }

    /// Every distinct parameter block.
    pub fn sources(&self) -> Vec<&QaoaParams> {
        match self {
            Self::Shared(q) => vec![q],
            Self::MultiAngle(v) => v.iter().collect(),
        }
    }

    /// Append an identity layer `(γ, β) = (0, 0)` to every block.
    pub fn extended(&self) -> Self {
        match self {
            Self::Shared(q) => Self::Shared(q.extended()),
            Self::MultiAngle(v) => Self::MultiAngle(v.iter().map(QaoaParams::extended).collect()),
        }
    }

    /// Copy with every angle reduced into `[0, 2π)`.
    ///
    /// Display only: `β` has period `π` on any model, but `γ` is `2π`-periodic
    /// only for integer spectra, so replay must use the raw angles.
    pub fn reduced(&self) -> Self {
        let tau = std::f64::consts::TAU;
        let flat: Vec<f64> = self.to_flat().iter().map(|a| a.rem_euclid(tau)).collect();
        self.with_flat(&flat).expect("same shape")
    }
}
