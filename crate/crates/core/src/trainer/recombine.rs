use crate::error::{Error, Result};
use crate::sim::SampleSet;

/// Default bound on the size of a recombined multiset.
pub const RECOMBINE_CAP: u128 = 1_000_000;

/// Cartesian product of per-slice sample multisets.
///
/// Each global bitstring scatters slice `a`'s bit `j` to variable
/// `index_maps[a][j]`; multiplicities multiply. Every one of the `num_vars`
/// variables must be owned by exactly one slice.
pub fn recombine(
    slice_samples: &[SampleSet],
    index_maps: &[Vec<usize>],
    num_vars: usize,
    cap: u128,
) -> Result<SampleSet> {
    if slice_samples.is_empty() {
        return Err(Error::Empty("slice samples"));
    }
    if slice_samples.len() != index_maps.len() {
        return Err(Error::Arity {
            expected: index_maps.len(),
            got: slice_samples.len(),
        });
    }
    if num_vars > 64 {
        return Err(Error::Size {
            what: "recombined bitstring",
            size: num_vars,
            cap: 64,
        });
    }
    let mut owned = vec![false; num_vars];
    for (set, map) in slice_samples.iter().zip(index_maps) {
        if set.num_bits() != map.len() {
            return Err(Error::Dimension {
                expected: map.len(),
                got: set.num_bits(),
            });
        }
        for &g in map {
            match owned.get_mut(g) {
                Some(slot) if !*slot => *slot = true,
                _ => {
                    return Err(Error::Validation(format!(
                        "variable {g} is out of range or owned twice"
                    )))
                }
            }
        }
    }
    if let Some(v) = owned.iter().position(|o| !o) {
        return Err(Error::Validation(format!(
            "variable {v} is not covered by any slice"
        )));
    }
    let size = slice_samples
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.shots() as u128))
        .unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::ProductCap { size, cap });
    }

    // Pre-scatter every distinct slice bitstring once.
    let parts: Vec<Vec<(u64, u64)>> = slice_samples
        .iter()
        .zip(index_maps)
        .map(|(set, map)| {
            set.iter()
                .map(|(z, c)| {
                    let g = map
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| z >> j & 1 == 1)
                        .fold(0u64, |acc, (_, &v)| acc | 1 << v);
                    (g, c)
                })
                .collect()
        })
        .collect();

    let mut out = SampleSet::new(num_vars);
    let mut acc: Vec<(u64, u64)> = vec![(0, 1)];
    for part in &parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for &(z, c) in &acc {
            for &(g, m) in part {
                next.push((z | g, c * m));
            }
        }
        acc = next;
    }
    for (z, c) in acc {
        out.add(z, c)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn set(n: usize, draws: &[u64]) -> SampleSet {
        SampleSet::from_draws(n, draws.iter().copied()).unwrap()
    }

    #[test]
    fn two_by_one() {
        // Slice A owns vars {0, 1}, slice B owns var {2}.
        let a = set(2, &[0b00, 0b10]);
        let b = set(1, &[0b1]);
        let g = recombine(&[a, b], &[vec![0, 1], vec![2]], 3, RECOMBINE_CAP).unwrap();
        assert_eq!(g.shots(), 2);
        assert_eq!(g.count(0b100), 1);
        assert_eq!(g.count(0b110), 1);
    }

    #[test]
    fn hundred_by_hundred() {
        let a = set(7, &(0..100).collect::<Vec<_>>());
        let b = set(7, &(0..100).collect::<Vec<_>>());
        let maps = [(0..7).collect(), (7..14).collect()];
        let g = recombine(&[a, b], &maps, 14, RECOMBINE_CAP).unwrap();
        assert_eq!(g.shots(), 10_000);
        assert_eq!(g.distinct(), 10_000);
    }

    #[test]
    fn single_slice_passes_through() {
        let a = set(3, &[1, 1, 5, 6]);
        let g = recombine(std::slice::from_ref(&a), &[vec![0, 1, 2]], 3, RECOMBINE_CAP).unwrap();
        assert_eq!(g, a);
    }

    #[test]
    fn cap_and_coverage_errors() {
        let a = set(1, &[0, 1, 1]);
        let b = set(1, &[0, 1]);
        assert!(matches!(
            recombine(&[a.clone(), b.clone()], &[vec![0], vec![1]], 2, 5),
            Err(Error::ProductCap { size: 6, cap: 5 })
        ));
        assert!(recombine(&[a.clone(), b.clone()], &[vec![0], vec![1]], 3, 100).is_err());
        assert!(recombine(&[a, b], &[vec![0], vec![0]], 2, 100).is_err());
    }

    proptest! {
        #[test]
        fn product_structure(
            da in prop::collection::vec(0u64..8, 1..12),
            db in prop::collection::vec(0u64..4, 1..12),
        ) {
            let a = set(3, &da);
            let b = set(2, &db);
            // Interleave ownership to exercise the scatter.
            let maps = [vec![4, 0, 2], vec![1, 3]];
            let g = recombine(&[a.clone(), b.clone()], &maps, 5, RECOMBINE_CAP).unwrap();
            prop_assert_eq!(g.shots(), a.shots() * b.shots());
            let mut expect: BTreeMap<(u64, u64), u64> = BTreeMap::new();
            for (za, ca) in a.iter() {
                for (zb, cb) in b.iter() {
                    *expect.entry((za, zb)).or_default() += ca * cb;
                }
            }
            for (z, c) in g.iter() {
                let gather = |map: &[usize]| map.iter().enumerate()
                    .fold(0u64, |acc, (j, &v)| acc | (z >> v & 1) << j);
                let key = (gather(&maps[0]), gather(&maps[1]));
                prop_assert_eq!(expect.get(&key).copied(), Some(c));
            }
        }
    }
}
