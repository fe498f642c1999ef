use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Statevector;

/// Entangling pattern of the hardware-efficient ansatz.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Entangler {
    /// CZ on `(0,1), (1,2), …, (n−2,n−1)`.
    #[default]
    Chain,
}

/// `angles[l][k]` is the Ry angle on qubit `k` in layer `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeaParams {
    angles: Vec<Vec<f64>>,
}

impl HeaParams {
    pub fn new(angles: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = angles.first() else {
            return Err(Error::Validation("HEA needs at least one layer".into()));
        };
        let width = first.len();
        if let Some(row) = angles.iter().find(|r| r.len() != width) {
            return Err(Error::Arity {
                expected: width,
                got: row.len(),
            });
        }
        Ok(Self { angles })
    }

    pub fn layers(&self) -> usize {
        self.angles.len()
    }

    pub fn width(&self) -> usize {
        self.angles[0].len()
    }

    pub fn angles(&self) -> &[Vec<f64>] {
        &self.angles
    }

    /// `(rotations, entanglers)` = `(nL, (n−1)L)`.
    pub fn gate_counts(&self) -> (usize, usize) {
        let (n, l) = (self.width(), self.layers());
        (n * l, n.saturating_sub(1) * l)
    }
}

/// Run the ansatz from `|0…0⟩`: each layer is one Ry per qubit followed by
/// the entangling chain.
pub fn run_hea(n: usize, params: &HeaParams, entangler: Entangler) -> Result<Statevector> {
    if params.width() != n {
        return Err(Error::Dimension {
            expected: n,
            got: params.width(),
        });
    }
    let mut state = Statevector::zero(n)?;
    for layer in params.angles() {
        for (k, &theta) in layer.iter().enumerate() {
            state.apply_ry(k, theta);
        }
        match entangler {
            Entangler::Chain => {
                for k in 0..n.saturating_sub(1) {
                    state.apply_cz(k, k + 1);
                }
            }
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_angles_leave_ground_state() {
        let p = HeaParams::new(vec![vec![0.0; 3]]).unwrap();
        let s = run_hea(3, &p, Entangler::Chain).unwrap();
        assert_eq!(s.probabilities()[0], 1.0);
        assert_eq!(p.gate_counts(), (3, 2));
    }

    #[test]
    fn pi_rotation_flips_single_qubit() {
        let p = HeaParams::new(vec![vec![PI]]).unwrap();
        let s = run_hea(1, &p, Entangler::Chain).unwrap();
        assert!((s.probabilities()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shape_checks() {
        assert!(HeaParams::new(vec![]).is_err());
        assert!(HeaParams::new(vec![vec![0.0; 2], vec![0.0; 3]]).is_err());
        let p = HeaParams::new(vec![vec![0.0; 2]]).unwrap();
        assert!(run_hea(3, &p, Entangler::Chain).is_err());
    }
}
