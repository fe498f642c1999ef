//! Derivative-free minimizers for noisy objectives.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rng::rng_for;

use super::{stream, OptimizerKind, TrainingConfig};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// State after one optimizer iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerStep {
    pub iteration: usize,
    /// Incumbent point after this iteration.
    pub x: Vec<f64>,
    /// Objective recorded for the incumbent.
    pub value: f64,
    /// Running minimum of `value` (and the starting value).
    pub best_value: f64,
    /// Objective evaluations made so far, including the start point.
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub x_best: Vec<f64>,
    pub f_best: f64,
    pub initial_value: f64,
    pub steps: Vec<OptimizerStep>,
    pub converged: bool,
    pub evaluations: usize,
}

/// Returned when the objective produced a non-finite value.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeAbort {
    /// Zero-based index of the offending evaluation.
    pub evaluation: usize,
    /// Everything recorded before the abort.
    pub partial: OptimizeResult,
}

impl From<OptimizeAbort> for Error {
    fn from(a: OptimizeAbort) -> Self {
        Error::NonFinite {
            evaluation: a.evaluation,
        }
    }
}

struct Tracker<F> {
    f: F,
    evaluations: usize,
    result: OptimizeResult,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64, OptimizeAbort> {
        let v = (self.f)(x);
        let index = self.evaluations;
        self.evaluations += 1;
        self.result.evaluations = self.evaluations;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(OptimizeAbort {
                evaluation: index,
                partial: self.result.clone(),
            })
        }
    }

    fn record(&mut self, iteration: usize, x: &[f64], value: f64) {
        if value < self.result.f_best {
            self.result.f_best = value;
            self.result.x_best = x.to_vec();
        }
        self.result.steps.push(OptimizerStep {
            iteration,
            x: x.to_vec(),
            value,
            best_value: self.result.f_best,
            evaluations: self.evaluations,
        });
    }
}

/// Minimize `f` from `x0` with the optimizer selected in `config`.
///
/// Nelder-Mead uses reflection 1, expansion 2, contraction 0.5 and shrink 0.5
/// on an axis-aligned start simplex of edge `initial_step`; it stops when the
/// spread of simplex values drops below `convergence_tol` and re-evaluates the
/// incumbent every `reevaluate_every` iterations. SPSA stops when its two
/// probes differ by less than `convergence_tol`.
pub fn minimize(
    f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    config: &TrainingConfig,
) -> Result<OptimizeResult, OptimizeAbort> {
    let mut t = Tracker {
        f,
        evaluations: 0,
        result: OptimizeResult {
            x_best: x0.to_vec(),
            f_best: f64::INFINITY,
            initial_value: f64::NAN,
            steps: Vec::new(),
            converged: false,
            evaluations: 0,
        },
    };
    let f0 = t.eval(x0)?;
    t.result.initial_value = f0;
    t.result.f_best = f0;
    match config.optimizer {
        OptimizerKind::NelderMead => nelder_mead(&mut t, x0, f0, config)?,
        OptimizerKind::Spsa => spsa(&mut t, x0, config)?,
    }
    Ok(t.result)
}

fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    t: &mut Tracker<F>,
    x0: &[f64],
    f0: f64,
    config: &TrainingConfig,
) -> Result<(), OptimizeAbort> {
    let d = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += config.initial_step;
        let v = t.eval(&x)?;
        simplex.push((x, v));
    }
    let at = |c: &[f64], dir: &[f64], s: f64| -> Vec<f64> {
        c.iter().zip(dir).map(|(ci, di)| ci + s * (di - ci)).collect()
    };

    for iteration in 1..=config.max_iters {
        if config.reevaluate_every > 0 && iteration % config.reevaluate_every == 0 {
            let best = (0..simplex.len())
                .min_by(|&a, &b| simplex[a].1.total_cmp(&simplex[b].1))
                .expect("non-empty simplex");
            simplex[best].1 = t.eval(&simplex[best].0)?;
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[d].1 - simplex[0].1;
        if spread < config.convergence_tol || d == 0 {
            t.result.converged = true;
            let (x, v) = simplex[0].clone();
            t.record(iteration, &x, v);
            break;
        }

        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / d as f64;
            }
        }
        let worst = simplex[d].clone();
        let xr = at(&centroid, &worst.0, -REFLECT);
        let fr = t.eval(&xr)?;
        if fr < simplex[0].1 {
            let xe = at(&centroid, &xr, EXPAND);
            let fe = t.eval(&xe)?;
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = at(&centroid, &xr, CONTRACT);
                let fc = t.eval(&xc)?;
                (xc, fc)
            } else {
                let xc = at(&centroid, &worst.0, CONTRACT);
                let fc = t.eval(&xc)?;
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[d] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x = at(&best, &vertex.0, SHRINK);
                    let v = t.eval(&x)?;
                    *vertex = (x, v);
                }
            }
        }
        let (x, v) = simplex
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .cloned()
            .expect("non-empty simplex");
        t.record(iteration, &x, v);
    }
    Ok(())
}

fn spsa<F: FnMut(&[f64]) -> f64>(
    t: &mut Tracker<F>,
    x0: &[f64],
    config: &TrainingConfig,
) -> Result<(), OptimizeAbort> {
    // Standard gain sequences a_k = a / (k + A)^0.602, c_k = c / k^0.101.
    let a = 0.2;
    let big_a = 0.1 * config.max_iters as f64;
    let c = config.initial_step;
    let mut rng = rng_for(config.seed, &[stream::SPSA]);
    let mut x = x0.to_vec();
    for iteration in 1..=config.max_iters {
        let k = iteration as f64;
        let ak = a / (k + big_a).powf(0.602);
        let ck = c / k.powf(0.101);
        let delta: Vec<f64> = (0..x.len())
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let plus: Vec<f64> = x.iter().zip(&delta).map(|(xi, di)| xi + ck * di).collect();
        let minus: Vec<f64> = x.iter().zip(&delta).map(|(xi, di)| xi - ck * di).collect();
        let yp = t.eval(&plus)?;
        let ym = t.eval(&minus)?;
        let (bx, bv) = if yp <= ym { (&plus, yp) } else { (&minus, ym) };
        let bx = bx.clone();
        t.record(iteration, &bx, bv);
        if (yp - ym).abs() < config.convergence_tol {
            t.result.converged = true;
            break;
        }
        let g = (yp - ym) / (2.0 * ck);
        for (xi, di) in x.iter_mut().zip(&delta) {
            *xi -= ak * g * di;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(max_iters: usize) -> TrainingConfig {
        TrainingConfig {
            max_iters,
            convergence_tol: 1e-12,
            reevaluate_every: 0,
            ..TrainingConfig::default()
        }
    }

    #[test]
    fn convex_one_dimensional() {
        let r = minimize(|x| (x[0] - 1.0).powi(2), &[0.0], &config(200)).unwrap();
        assert!((r.x_best[0] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn constant_converges_immediately() {
        let r = minimize(|_| 3.0, &[0.4, -0.2], &config(50)).unwrap();
        assert!(r.converged);
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].iteration, 1);
        assert_eq!(r.x_best, vec![0.4, -0.2]);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = minimize(f, &[0.0, 0.0], &config(2000)).unwrap();
        assert!(f(&r.x_best) < 1e-3, "f = {}", f(&r.x_best));
    }

    #[test]
    fn best_so_far_is_monotone_and_bounded() {
        let f = |x: &[f64]| x[0].sin() + (x[1] * 1.3).cos() + 0.1 * x[2];
        let r = minimize(f, &[0.3, 0.1, -0.2], &config(40)).unwrap();
        assert!(r.steps.len() <= 40);
        for w in r.steps.windows(2) {
            assert!(w[1].best_value <= w[0].best_value);
        }
        let min_value = r.steps.iter().map(|s| s.value).fold(r.initial_value, f64::min);
        assert_eq!(r.f_best, min_value);
        assert_eq!(f(&r.x_best), r.f_best);
    }

    #[test]
    fn non_finite_aborts_with_trace() {
        let mut calls = 0;
        let err = minimize(
            |x| {
                calls += 1;
                if calls > 5 {
                    f64::NAN
                } else {
                    x[0] * x[0]
                }
            },
            &[1.0],
            &config(100),
        )
        .unwrap_err();
        assert_eq!(err.evaluation, 5);
        assert_eq!(err.partial.initial_value, 1.0);
        assert!(minimize(|_| f64::INFINITY, &[0.0], &config(5)).is_err());
    }

    #[test]
    fn spsa_descends_quadratic() {
        let cfg = TrainingConfig {
            optimizer: OptimizerKind::Spsa,
            ..config(300)
        };
        let f = |x: &[f64]| (x[0] - 0.5).powi(2) + (x[1] + 0.25).powi(2);
        let r = minimize(f, &[0.0, 0.0], &cfg).unwrap();
        assert!(r.f_best < 1e-2);
        let again = minimize(f, &[0.0, 0.0], &cfg).unwrap();
        assert_eq!(r, again);
    }
}
