//! Dense-matrix reference simulator.
//!
//! Builds every layer as an explicit `2^n × 2^n` unitary (matrix
//! exponentials for QAOA, Kronecker-expanded gates for the HEA) and
//! multiplies them onto the initial vector. Slow, but shares no code with
//! the statevector kernels.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Assignment, Domain, Model};

use super::{Entangler, HeaParams, QaoaParams, Statevector};

pub const DENSE_ORACLE_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum AnsatzParams {
    Qaoa(QaoaParams),
    Hea(HeaParams, Entangler),
}

type CMat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Embed a one-qubit operator on qubit `k` of `n` (qubit 0 is the rightmost
/// Kronecker factor).
fn embed(op: &CMat, k: usize, n: usize) -> CMat {
    let id = CMat::identity(2, 2);
    (0..n).rev().fold(CMat::identity(1, 1), |acc, q| {
        acc.kronecker(if q == k { op } else { &id })
    })
}

fn hamiltonian<D: Domain>(model: &Model<D>) -> Result<CMat> {
    let n = model.num_vars();
    let dim = 1usize << n;
    let mut h = CMat::zeros(dim, dim);
    for z in 0..dim {
        h[(z, z)] = c(model.evaluate(&Assignment::from_index(z as u64, n))?);
    }
    Ok(h)
}

/// Final state of the ansatz computed with explicit matrices.
pub fn dense_oracle<D: Domain>(model: &Model<D>, params: &AnsatzParams) -> Result<Statevector> {
    let n = model.num_vars();
    if n == 0 {
        return Err(Error::Validation("need at least one qubit".into()));
    }
    if n > DENSE_ORACLE_CAP {
        return Err(Error::Size {
            what: "dense oracle qubit count",
            size: n,
            cap: DENSE_ORACLE_CAP,
        });
    }
    let dim = 1usize << n;
    let mut psi = DVector::<Complex64>::zeros(dim);
    psi[0] = c(1.0);
    let minus_i = Complex64::new(0.0, -1.0);

    match params {
        AnsatzParams::Qaoa(p) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let hadamard = CMat::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
            let all_h = (0..n).fold(CMat::identity(1, 1), |acc, _| acc.kronecker(&hadamard));
            psi = all_h * psi;

            let h_f = hamiltonian(model)?;
            let pauli_x = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
            let h_i = (0..n).fold(CMat::zeros(dim, dim), |acc, k| acc + embed(&pauli_x, k, n));
            for (&gamma, &beta) in p.gamma().iter().zip(p.beta()) {
                let phase = (&h_f * (minus_i * gamma)).exp();
                let mixer = (&h_i * (minus_i * beta)).exp();
                psi = mixer * (phase * psi);
            }
        }
        AnsatzParams::Hea(p, entangler) => {
            if p.width() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: p.width(),
                });
            }
            let mut chain = CMat::identity(dim, dim);
            match entangler {
                Entangler::Chain => {
                    for k in 0..n.saturating_sub(1) {
                        let mut cz = CMat::identity(dim, dim);
                        for z in 0..dim {
                            if z >> k & 1 == 1 && z >> (k + 1) & 1 == 1 {
                                cz[(z, z)] = c(-1.0);
                            }
                        }
                        chain = cz * chain;
                    }
                }
            }
            for layer in p.angles() {
                for (k, &theta) in layer.iter().enumerate() {
                    let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                    let ry = CMat::from_row_slice(2, 2, &[c(co), c(-si), c(si), c(co)]);
                    psi = embed(&ry, k, n) * psi;
                }
                psi = &chain * psi;
            }
        }
    }
    Statevector::from_amplitudes(psi.iter().copied().collect())
}
