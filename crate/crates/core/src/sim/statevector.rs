use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::diag::check_width;
use super::{DiagonalHamiltonian, QaoaParams, PARALLEL_QUBITS};

/// `2^n` complex amplitudes; qubit `k` is bit `k` of the index.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The computational basis state `|z⟩`.
    pub fn basis(n: usize, z: u64) -> Result<Self> {
        check_width(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        let slot = amps.get_mut(z as usize).ok_or(Error::Dimension {
            expected: 1 << n,
            got: z as usize,
        })?;
        *slot = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Wrap raw amplitudes; the length must be `2^n` and the norm 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::Validation(format!("length {len} is not 2^n")));
        }
        let n = len.trailing_zeros() as usize;
        check_width(n)?;
        let s = Self { n, amps };
        if (s.norm_sqr() - 1.0).abs() > 1e-9 {
            return Err(Error::Validation("state is not normalized".into()));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Statevector) -> Result<f64> {
        self.check_dim(other.amps.len())?;
        let overlap: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr())
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.amps.len() {
            return Err(Error::Dimension {
                expected: self.amps.len(),
                got: len,
            });
        }
        Ok(())
    }

    fn parallel(&self) -> bool {
        self.n >= PARALLEL_QUBITS
    }

    /// `|ψ⟩ ← e^{−iγH}|ψ⟩`.
    pub fn apply_phase_separator(&mut self, h: &DiagonalHamiltonian, gamma: f64) -> Result<()> {
        self.check_dim(h.energies().len())?;
        if gamma == 0.0 {
            return Ok(());
        }
        let kick = |(a, &e): (&mut Complex64, &f64)| *a *= Complex64::cis(-gamma * e);
        if self.parallel() {
            self.amps.par_iter_mut().zip(h.energies()).for_each(kick);
        } else {
            self.amps.iter_mut().zip(h.energies()).for_each(kick);
        }
        Ok(())
    }

    /// Apply `e^{−iβσ^x}` (= `Rx(2β)`) to every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        if beta == 0.0 {
            return;
        }
        let (c, s) = (beta.cos(), beta.sin());
        for k in 0..self.n {
            // [[c, -is], [-is, c]]
            self.apply_single_qubit(k, [
                [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
            ]);
        }
    }

    /// `Ry(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]` on qubit `k`.
    pub fn apply_ry(&mut self, k: usize, theta: f64) {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        self.apply_single_qubit(k, [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ]);
    }

    /// Controlled-Z between qubits `a` and `b`.
    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        let flip = |(z, amp): (usize, &mut Complex64)| {
            if z & mask == mask {
                *amp = -*amp;
            }
        };
        if self.parallel() {
            self.amps.par_iter_mut().enumerate().for_each(flip);
        } else {
            self.amps.iter_mut().enumerate().for_each(flip);
        }
    }

    fn apply_single_qubit(&mut self, k: usize, m: [[Complex64; 2]; 2]) {
        let stride = 1usize << k;
        let update = |block: &mut [Complex64]| {
            for pair in block.chunks_exact_mut(2 * stride) {
                let (lo, hi) = pair.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a0, *a1);
                    *a0 = m[0][0] * x + m[0][1] * y;
                    *a1 = m[1][0] * x + m[1][1] * y;
                }
            }
        };
        if self.parallel() {
            let block = (2 * stride).max(1 << 12);
            self.amps.par_chunks_mut(block).for_each(update);
        } else {
            update(&mut self.amps);
        }
    }
}

/// Uniform superposition `H^{⊗n}|0…0⟩`.
pub fn init_plus(n: usize) -> Result<Statevector> {
    check_width(n)?;
    let a = (0.5f64).powf(n as f64 / 2.0);
    Ok(Statevector {
        n,
        amps: vec![Complex64::new(a, 0.0); 1 << n],
    })
}

/// `e^{−iβ_p H_i} e^{−iγ_p H_f} ⋯ e^{−iβ_1 H_i} e^{−iγ_1 H_f} |+⟩^{⊗n}`.
pub fn run_qaoa(h: &DiagonalHamiltonian, params: &QaoaParams) -> Result<Statevector> {
    let mut state = init_plus(h.num_qubits())?;
    for (&gamma, &beta) in params.gamma().iter().zip(params.beta()) {
        state.apply_phase_separator(h, gamma)?;
        state.apply_mixer(beta);
    }
    Ok(state)
}

/// `⟨ψ|H|ψ⟩` for a diagonal `H`.
pub fn exact_expectation(state: &Statevector, h: &DiagonalHamiltonian) -> Result<f64> {
    state.check_dim(h.energies().len())?;
    Ok(state
        .amps
        .iter()
        .zip(h.energies())
        .map(|(a, e)| a.norm_sqr() * e)
        .sum())
}

/// `⟨ψ|H²|ψ⟩ − ⟨ψ|H|ψ⟩²`.
pub fn exact_variance(state: &Statevector, h: &DiagonalHamiltonian) -> Result<f64> {
    let mean = exact_expectation(state, h)?;
    Ok(state
        .amps
        .iter()
        .zip(h.energies())
        .map(|(a, e)| a.norm_sqr() * (e - mean).powi(2))
        .sum())
}
