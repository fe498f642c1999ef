use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::model::{Assignment, QuboModel, TagId};
use crate::sim::SampleSet;

use super::train::initial_angles;
use super::{pareto_front, train_qaoa_scored, AngleSet, ObjectiveVector, TrainingConfig, TrainingMode, TrainingTrace};

/// A classical objective evaluated on full assignments.
pub type ObjectiveFn<'a> = &'a dyn Fn(&Assignment) -> f64;

/// Squared-penalty QUBO `Σ_i (Σ_j c_ij x_j − b_i)²` for the equality
/// constraints `(terms_i, b_i)`; constraint `i` is tagged `user:c<i>`.
pub fn build_constraint_qubo(
    num_vars: usize,
    constraints: &[(Vec<(usize, f64)>, f64)],
) -> Result<QuboModel> {
    let mut model = QuboModel::new(num_vars);
    for (i, (terms, target)) in constraints.iter().enumerate() {
        model.add_squared_penalty(TagId::User(format!("c{i}")), terms, *target)?;
    }
    Ok(model)
}

/// Front member closest to the ideal point after per-objective min-max
/// normalization over the front (a constant objective normalizes to 0).
/// Ties go to the earliest member.
pub fn knee_point(front: &[ObjectiveVector]) -> Result<usize> {
    let first = front.first().ok_or(Error::Empty("front"))?;
    let arity = first.values.len();
    let mut lo = vec![f64::INFINITY; arity];
    let mut hi = vec![f64::NEG_INFINITY; arity];
    for p in front {
        for (d, &v) in p.values.iter().enumerate() {
            lo[d] = lo[d].min(v);
            hi[d] = hi[d].max(v);
        }
    }
    let norm = |p: &ObjectiveVector| -> f64 {
        p.values
            .iter()
            .enumerate()
            .map(|(d, &v)| {
                let range = hi[d] - lo[d];
                if range > 0.0 {
                    ((v - lo[d]) / range).powi(2)
                } else {
                    0.0
                }
            })
            .sum()
    };
    let mut best = 0;
    let mut best_norm = norm(first);
    for (i, p) in front.iter().enumerate().skip(1) {
        let n = norm(p);
        if n < best_norm {
            best = i;
            best_norm = n;
        }
    }
    Ok(best)
}

/// QAOA whose circuit implements only the constraint Hamiltonian `H`.
///
/// Each distinct sample `x` scores as `(f_i(x) + H(x))_i`. The incumbent
/// value of an evaluation is the mean of the components of the knee point
/// of that evaluation's Pareto front; with one objective this is
/// `min_x f_1(x) + H(x)`. Every evaluation's front is kept in the trace.
pub fn train_multi_objective(
    constraint_model: &QuboModel,
    objectives: &[ObjectiveFn<'_>],
    p: usize,
    config: &TrainingConfig,
) -> Result<TrainingTrace> {
    if objectives.is_empty() {
        return Err(Error::Empty("objectives"));
    }
    config.validate(p)?;
    let init = initial_angles(AngleSet::shared_zeros(p)?, config)?;
    let compiled = constraint_model.compile();
    let fronts: RefCell<Vec<Vec<Vec<f64>>>> = RefCell::new(Vec::new());
    let score = |samples: &SampleSet| -> Result<f64> {
        let points: Vec<ObjectiveVector> = samples
            .iter()
            .map(|(z, _)| {
                let x = samples.assignment(z);
                let h = compiled.energy(z);
                ObjectiveVector::new(objectives.iter().map(|f| f(&x) + h).collect())
            })
            .collect();
        let front: Vec<ObjectiveVector> = pareto_front(&points)?
            .into_iter()
            .map(|i| points[i].clone())
            .collect();
        let knee = &front[knee_point(&front)?];
        let value = knee.values.iter().sum::<f64>() / knee.values.len() as f64;
        fronts
            .borrow_mut()
            .push(front.into_iter().map(|p| p.values).collect());
        Ok(value)
    };
    let mut trace = train_qaoa_scored(constraint_model, &init, config, score)?;
    trace.mode = TrainingMode::MultiObjective;
    trace.fronts = Some(fronts.into_inner());
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_hot(n: usize) -> QuboModel {
        build_constraint_qubo(n, &[((0..n).map(|i| (i, 1.0)).collect(), 1.0)]).unwrap()
    }

    #[test]
    fn constraint_model_vanishes_on_feasible_points() {
        let m = one_hot(3);
        assert_eq!(m.evaluate(&Assignment::from_bits(vec![0, 1, 0])).unwrap(), 0.0);
        assert_eq!(m.evaluate(&Assignment::from_bits(vec![1, 1, 0])).unwrap(), 1.0);
    }

    #[test]
    fn knee_prefers_balanced_point() {
        let f = [
            ObjectiveVector::new(vec![0.0, 10.0]),
            ObjectiveVector::new(vec![4.0, 4.0]),
            ObjectiveVector::new(vec![10.0, 0.0]),
        ];
        assert_eq!(knee_point(&f).unwrap(), 1);
        assert_eq!(knee_point(&f[..1]).unwrap(), 0);
    }

    #[test]
    fn single_objective_matches_scalar_training() {
        let m = one_hot(3);
        let weights = [0.3, -0.2, 0.5];
        let f = |x: &Assignment| -> f64 {
            (0..3).map(|i| if x.bit(i) { weights[i] } else { 0.0 }).sum()
        };
        let cfg = TrainingConfig {
            max_iters: 15,
            seed: 5,
            ..TrainingConfig::default()
        };
        let multi = train_multi_objective(&m, &[&f], 1, &cfg).unwrap();
        let compiled = m.compile();
        let scalar = train_qaoa_scored(&m, &AngleSet::shared_zeros(1).unwrap(), &cfg, |s| {
            Ok(s.min_by(|z| f(&s.assignment(z)) + compiled.energy(z))?.1)
        })
        .unwrap();
        assert_eq!(multi.iterations, scalar.iterations);
        assert_eq!(multi.best_objective, scalar.best_objective);
        assert_eq!(multi.fronts.as_ref().unwrap().len(), multi.evaluations);
    }

    #[test]
    fn fronts_are_non_dominated() {
        let m = one_hot(3);
        let f1 = |x: &Assignment| x.bits().iter().map(|&b| b as f64).sum::<f64>();
        let f2 = |x: &Assignment| if x.bit(0) { 0.0 } else { 2.0 };
        let cfg = TrainingConfig {
            max_iters: 5,
            ..TrainingConfig::default()
        };
        let t = train_multi_objective(&m, &[&f1, &f2], 1, &cfg).unwrap();
        for front in t.fronts.unwrap() {
            for a in &front {
                for b in &front {
                    let dom = a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y);
                    assert!(!dom);
                }
            }
        }
        assert!(train_multi_objective(&m, &[], 1, &cfg).is_err());
    }
}
