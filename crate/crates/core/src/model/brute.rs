use rayon::prelude::*;

use crate::error::{Error, Result};

use super::{Assignment, Domain, Model};

/// Default variable cap for exhaustive enumeration.
pub const BRUTE_FORCE_CAP: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub energy: f64,
    /// Lexicographically smallest minimizer, comparing `x_0` first.
    pub argmin: Assignment,
    /// Number of assignments within `1e-9·max(1,|E|)` of the minimum.
    pub degeneracy: u64,
}

pub fn brute_force_min<D: Domain>(model: &Model<D>) -> Result<BruteForceResult> {
    brute_force_min_with_cap(model, BRUTE_FORCE_CAP)
}

pub fn brute_force_min_with_cap<D: Domain>(
    model: &Model<D>,
    cap: usize,
) -> Result<BruteForceResult> {
    let n = model.num_vars();
    if n > cap || n >= 64 {
        return Err(Error::Size {
            what: "brute-force variable count",
            size: n,
            cap,
        });
    }
    let compiled = model.compile();
    let total = 1u64 << n;
    let energy = (0..total)
        .into_par_iter()
        .map(|z| compiled.energy(z))
        .reduce(|| f64::INFINITY, f64::min);
    let tol = 1e-9 * energy.abs().max(1.0);
    // Bit reversal turns "x_0 first" lexicographic order into integer order.
    let key = |z: u64| if n == 0 { 0 } else { z.reverse_bits() >> (64 - n) };
    let (degeneracy, best_key) = (0..total)
        .into_par_iter()
        .filter(|&z| compiled.energy(z) <= energy + tol)
        .map(|z| (1u64, key(z)))
        .reduce(|| (0, u64::MAX), |a, b| (a.0 + b.0, a.1.min(b.1)));
    Ok(BruteForceResult {
        energy,
        argmin: Assignment::from_index(key(best_key), n),
        degeneracy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_maxcut_ising, MaxCutSign, QuboModel, TagId};

    #[test]
    fn one_variable() {
        let mut q = QuboModel::new(1);
        q.add_linear(TagId::Objective, 0, -1.0).unwrap();
        let r = brute_force_min(&q).unwrap();
        assert_eq!(r.energy, -1.0);
        assert_eq!(r.argmin.bits(), &[1]);
        assert_eq!(r.degeneracy, 1);
    }

    #[test]
    fn triangle_degeneracy() {
        let m = build_maxcut_ising(3, &[(0, 1), (1, 2), (0, 2)], MaxCutSign::default()).unwrap();
        let r = brute_force_min(&m).unwrap();
        assert_eq!(r.energy, -1.0);
        assert_eq!(r.degeneracy, 6);
        // 001 < 010 < 011 ...; the all-equal strings are excluded.
        assert_eq!(r.argmin.to_string(), "001");
    }

    #[test]
    fn size_cap() {
        let q = QuboModel::new(30);
        assert!(matches!(brute_force_min(&q), Err(Error::Size { .. })));
        assert!(brute_force_min_with_cap(&QuboModel::new(5), 4).is_err());
    }

    #[test]
    fn empty_model_is_offset() {
        let mut q = QuboModel::new(2);
        q.add_offset(TagId::Objective, 3.5).unwrap();
        let r = brute_force_min(&q).unwrap();
        assert_eq!(r.energy, 3.5);
        assert_eq!(r.degeneracy, 4);
        assert_eq!(r.argmin.bits(), &[0, 0]);
    }
}
