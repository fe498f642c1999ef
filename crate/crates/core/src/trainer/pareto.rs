use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values of every objective for one candidate, minimized jointly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector {
    pub values: Vec<f64>,
}

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    /// `self ≤ other` everywhere and `<` somewhere.
    pub fn dominates(&self, other: &Self) -> bool {
        let mut strict = false;
        for (a, b) in self.values.iter().zip(&other.values) {
            if a > b {
                return false;
            }
            strict |= a < b;
        }
        strict
    }
}

/// Indices of the non-dominated points, in input order.
///
/// Points are visited in lexicographic order, so any dominator of a point
/// is visited before it; each point is only tested against the current front.
pub fn pareto_front(points: &[ObjectiveVector]) -> Result<Vec<usize>> {
    let first = points.first().ok_or(Error::Empty("objective vectors"))?;
    let arity = first.values.len();
    if let Some(bad) = points.iter().find(|p| p.values.len() != arity) {
        return Err(Error::Arity {
            expected: arity,
            got: bad.values.len(),
        });
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .values
            .iter()
            .zip(&points[b].values)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut front: Vec<usize> = Vec::new();
    for i in order {
        if !front.iter().any(|&f| points[f].dominates(&points[i])) {
            front.push(i);
        }
    }
    front.sort_unstable();
    Ok(front)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_for;
    use proptest::prelude::*;
    use rand::Rng;

    fn pts(v: &[&[f64]]) -> Vec<ObjectiveVector> {
        v.iter().map(|p| ObjectiveVector::new(p.to_vec())).collect()
    }

    fn brute(points: &[ObjectiveVector]) -> Vec<usize> {
        (0..points.len())
            .filter(|&i| {
                !(0..points.len()).any(|j| {
                    let (a, b) = (&points[j].values, &points[i].values);
                    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
                })
            })
            .collect()
    }

    #[test]
    fn small_examples() {
        let p = pts(&[&[1.0, 2.0], &[2.0, 1.0], &[2.0, 2.0]]);
        assert_eq!(pareto_front(&p).unwrap(), vec![0, 1]);
        assert_eq!(pareto_front(&pts(&[&[3.0, 4.0]])).unwrap(), vec![0]);
        assert!(pareto_front(&[]).is_err());
        assert!(pareto_front(&pts(&[&[1.0], &[1.0, 2.0]])).is_err());
    }

    #[test]
    fn duplicates_are_all_kept() {
        let p = pts(&[&[1.0, 1.0], &[1.0, 1.0], &[0.0, 2.0]]);
        assert_eq!(pareto_front(&p).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn matches_brute_force_on_random_points() {
        let mut rng = rng_for(17, &[]);
        for arity in 1..=4 {
            let p: Vec<ObjectiveVector> = (0..200)
                .map(|_| ObjectiveVector::new((0..arity).map(|_| rng.random_range(0..20) as f64).collect()))
                .collect();
            assert_eq!(pareto_front(&p).unwrap(), brute(&p));
        }
    }

    proptest! {
        #[test]
        fn front_matches_oracle(raw in prop::collection::vec(prop::collection::vec(-5i32..5, 3), 1..40)) {
            let p: Vec<ObjectiveVector> = raw
                .iter()
                .map(|v| ObjectiveVector::new(v.iter().map(|&x| x as f64).collect()))
                .collect();
            prop_assert_eq!(pareto_front(&p).unwrap(), brute(&p));
        }
    }
}
