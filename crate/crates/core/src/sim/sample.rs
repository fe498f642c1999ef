use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Assignment;
use crate::rng::rng_for;

use super::Statevector;

/// Multiset of measured bitstrings, keyed by basis index (bit `k` = qubit `k`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSet {
    n: usize,
    counts: BTreeMap<u64, u64>,
    shots: u64,
}

impl SampleSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            counts: BTreeMap::new(),
            shots: 0,
        }
    }

    pub fn from_counts(n: usize, counts: BTreeMap<u64, u64>) -> Result<Self> {
        let mut set = Self::new(n);
        for (z, c) in counts {
            set.add(z, c)?;
        }
        Ok(set)
    }

    /// Build from individual draws.
    pub fn from_draws(n: usize, draws: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = Self::new(n);
        for z in draws {
            set.add(z, 1)?;
        }
        Ok(set)
    }

    pub fn add(&mut self, z: u64, count: u64) -> Result<()> {
        if self.n < 64 && z >> self.n != 0 {
            return Err(Error::Validation(format!(
                "bitstring {z:#b} wider than {} bits",
                self.n
            )));
        }
        if count > 0 {
            *self.counts.entry(z).or_insert(0) += count;
            self.shots += count;
        }
        Ok(())
    }

    pub fn num_bits(&self) -> usize {
        self.n
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn is_empty(&self) -> bool {
        self.shots == 0
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, z: u64) -> u64 {
        self.counts.get(&z).copied().unwrap_or(0)
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&z, &c)| (z, c))
    }

    /// Every draw individually, in index order.
    pub fn draws(&self) -> impl Iterator<Item = u64> + '_ {
        self.iter()
            .flat_map(|(z, c)| std::iter::repeat_n(z, c as usize))
    }

    pub fn assignment(&self, z: u64) -> Assignment {
        Assignment::from_index(z, self.n)
    }

    /// Count-weighted mean of `f` over the multiset.
    pub fn mean_by(&self, mut f: impl FnMut(u64) -> f64) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::Empty("sample set"));
        }
        let total: f64 = self.iter().map(|(z, c)| c as f64 * f(z)).sum();
        Ok(total / self.shots as f64)
    }

    /// Smallest `f` over the distinct samples, with its bitstring.
    pub fn min_by(&self, mut f: impl FnMut(u64) -> f64) -> Result<(u64, f64)> {
        self.counts
            .keys()
            .map(|&z| (z, f(z)))
            .fold(None, |best: Option<(u64, f64)>, cur| match best {
                Some(b) if b.1 <= cur.1 => Some(b),
                _ => Some(cur),
            })
            .ok_or(Error::Empty("sample set"))
    }
}

/// Draw `shots` i.i.d. outcomes from `|amp|²` with a stream seeded by `seed`.
pub fn sample(state: &Statevector, shots: u64, seed: u64) -> Result<SampleSet> {
    if shots == 0 {
        return Err(Error::Validation("shots must be positive".into()));
    }
    let mut cumulative = Vec::with_capacity(state.amplitudes().len());
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (z, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            last_nonzero = z;
        }
        acc += p;
        cumulative.push(acc);
    }
    let mut rng = rng_for(seed, &[]);
    let mut set = SampleSet::new(state.num_qubits());
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let z = cumulative.partition_point(|&c| c <= u).min(last_nonzero);
        set.add(z as u64, 1)?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::init_plus;

    #[test]
    fn basis_state_always_measures_itself() {
        // "0110" with x_0 first is index 0b0110 = 6.
        let s = Statevector::basis(4, 6).unwrap();
        let set = sample(&s, 1000, 3).unwrap();
        assert_eq!(set.counts().len(), 1);
        assert_eq!(set.count(6), 1000);
        assert_eq!(set.assignment(6).to_string(), "0110");
    }

    #[test]
    fn uniform_frequencies() {
        let s = init_plus(2).unwrap();
        let set = sample(&s, 100_000, 11).unwrap();
        for z in 0..4 {
            let f = set.count(z) as f64 / 1e5;
            assert!((f - 0.25).abs() < 0.01, "{z}: {f}");
        }
    }

    #[test]
    fn seeded_determinism() {
        let s = init_plus(5).unwrap();
        assert_eq!(sample(&s, 500, 42).unwrap(), sample(&s, 500, 42).unwrap());
        assert_ne!(sample(&s, 500, 42).unwrap(), sample(&s, 500, 43).unwrap());
    }

    #[test]
    fn mean_and_min() {
        let set = SampleSet::from_draws(2, [1, 1, 3]).unwrap();
        let e = |z: u64| if z == 1 { 2.0 } else { 5.0 };
        assert_eq!(set.mean_by(e).unwrap(), 3.0);
        assert_eq!(set.min_by(e).unwrap(), (1, 2.0));
        assert!(SampleSet::new(2).mean_by(e).is_err());
        assert!(SampleSet::from_draws(2, [4]).is_err());
    }
}
