use rand::seq::index;

use crate::error::{Error, Result};
use crate::model::{Assignment, QuboModel};
use crate::rng::Rng;
use crate::sim::SampleSet;

/// Keep `min(m, shots)` draws of a slice's samples.
///
/// Draws satisfying every penalty group of `slice_model` are taken first,
/// uniformly without replacement from the multiset. Any shortfall is filled
/// with infeasible draws in ascending slice energy (ties by basis index).
pub fn subsample(
    samples: &SampleSet,
    slice_model: &QuboModel,
    m: usize,
    rng: &mut Rng,
) -> Result<SampleSet> {
    if m == 0 {
        return Err(Error::Validation("m must be at least 1".into()));
    }
    if samples.num_bits() != slice_model.num_vars() {
        return Err(Error::Dimension {
            expected: slice_model.num_vars(),
            got: samples.num_bits(),
        });
    }
    let mut feasible: Vec<(u64, u64)> = Vec::new();
    let mut infeasible: Vec<(f64, u64, u64)> = Vec::new();
    for (z, c) in samples.iter() {
        let x = Assignment::from_index(z, samples.num_bits());
        if slice_model.penalties_satisfied(&x)? {
            feasible.push((z, c));
        } else {
            infeasible.push((slice_model.evaluate(&x)?, z, c));
        }
    }
    let total_feasible: u64 = feasible.iter().map(|&(_, c)| c).sum();
    let mut out = SampleSet::new(samples.num_bits());

    if total_feasible > m as u64 {
        // Pick m draw positions out of the expanded feasible multiset.
        let mut ends = Vec::with_capacity(feasible.len());
        let mut acc = 0u64;
        for &(_, c) in &feasible {
            acc += c;
            ends.push(acc);
        }
        for pos in index::sample(rng, total_feasible as usize, m) {
            let slot = ends.partition_point(|&e| e <= pos as u64);
            out.add(feasible[slot].0, 1)?;
        }
        return Ok(out);
    }

    for &(z, c) in &feasible {
        out.add(z, c)?;
    }
    infeasible.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut remaining = m as u64 - total_feasible;
    for (_, z, c) in infeasible {
        if remaining == 0 {
            break;
        }
        let take = c.min(remaining);
        out.add(z, take)?;
        remaining -= take;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TagId;
    use crate::rng::rng_for;
    use proptest::prelude::*;

    /// Two variables; penalty `(1 − x0 − x1)²` plus an objective `2·x1`.
    fn one_hot_pair() -> QuboModel {
        let mut m = QuboModel::new(2);
        m.add_squared_penalty(TagId::Vehicle(0), &[(0, 1.0), (1, 1.0)], 1.0)
            .unwrap();
        m.add_linear(TagId::Route(0), 1, 2.0).unwrap();
        m
    }

    #[test]
    fn all_feasible_small_shots_returns_everything() {
        let s = SampleSet::from_draws(2, [0b01, 0b10, 0b10]).unwrap();
        let out = subsample(&s, &one_hot_pair(), 10, &mut rng_for(0, &[])).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn feasible_beat_lower_energy_infeasible() {
        // One-hot over three variables; the infeasible draw is cheapest.
        let mut m = QuboModel::new(3);
        m.add_squared_penalty(TagId::Vehicle(0), &[(0, 1.0), (1, 1.0), (2, 1.0)], 1.0)
            .unwrap();
        m.add_linear(TagId::Route(0), 0, 5.0).unwrap();
        m.add_linear(TagId::Route(0), 1, 7.0).unwrap();
        let draws = [0b001u64, 0b000, 0b010];
        let energies: Vec<f64> = draws
            .iter()
            .map(|&z| m.evaluate(&Assignment::from_index(z, 3)).unwrap())
            .collect();
        assert_eq!(energies, vec![5.0, 1.0, 7.0]);
        let s = SampleSet::from_draws(3, draws).unwrap();
        let out = subsample(&s, &m, 2, &mut rng_for(1, &[])).unwrap();
        assert_eq!(out.count(0b001), 1);
        assert_eq!(out.count(0b010), 1);
        assert_eq!(out.shots(), 2);
    }

    #[test]
    fn infeasible_fallback_takes_lowest_energy() {
        // 00 has E=1 and 11 has E=3; neither is one-hot.
        let m = one_hot_pair();
        let s = SampleSet::from_draws(2, [0b11, 0b00, 0b11, 0b00, 0b11]).unwrap();
        let out = subsample(&s, &m, 2, &mut rng_for(2, &[])).unwrap();
        assert_eq!(out.count(0b00), 2);
        assert_eq!(out.shots(), 2);
    }

    #[test]
    fn deterministic_per_seed() {
        let m = one_hot_pair();
        let s = SampleSet::from_draws(2, (0..500).map(|i| 1 + (i % 2))).unwrap();
        let a = subsample(&s, &m, 100, &mut rng_for(5, &[])).unwrap();
        let b = subsample(&s, &m, 100, &mut rng_for(5, &[])).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn subset_size_and_priority(
            draws in prop::collection::vec(0u64..4, 1..60),
            m in 1usize..80,
            seed in any::<u64>(),
        ) {
            let model = one_hot_pair();
            let s = SampleSet::from_draws(2, draws.iter().copied()).unwrap();
            let out = subsample(&s, &model, m, &mut rng_for(seed, &[])).unwrap();
            prop_assert_eq!(out.shots(), (m as u64).min(s.shots()));
            for (z, c) in out.iter() {
                prop_assert!(c <= s.count(z));
            }
            let feasible = |z: u64| z == 0b01 || z == 0b10;
            let in_feasible: u64 = s.iter().filter(|&(z, _)| feasible(z)).map(|(_, c)| c).sum();
            let out_feasible: u64 = out.iter().filter(|&(z, _)| feasible(z)).map(|(_, c)| c).sum();
            prop_assert_eq!(out_feasible, in_feasible.min(m as u64));
        }
    }
}
