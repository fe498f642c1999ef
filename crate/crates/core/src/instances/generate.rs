use std::collections::BTreeSet;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::VrpInstance;
use crate::rng::rng_for;

const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Customer count.
    pub n: usize,
    #[serde(rename = "A")]
    pub vehicles: usize,
    /// Coordinates lie in `[−grid_half, grid_half]` on both axes.
    #[serde(default = "default_grid_half")]
    pub grid_half: i64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    pub seed: u64,
}

fn default_grid_half() -> i64 {
    50
}

fn default_sigma() -> f64 {
    20.0
}

impl GeneratorConfig {
    pub fn new(n: usize, vehicles: usize, seed: u64) -> Self {
        Self {
            n,
            vehicles,
            grid_half: default_grid_half(),
            sigma: default_sigma(),
            seed,
        }
    }
}

/// Depot at the origin plus `n` distinct customers, each axis drawn from a
/// rounded `N(0, σ²)` and clamped to the grid. Collisions are re-drawn.
pub fn generate_vrp(cfg: &GeneratorConfig) -> Result<VrpInstance> {
    if cfg.n == 0 || cfg.vehicles == 0 {
        return Err(Error::Validation("n and A must be at least 1".into()));
    }
    if !(cfg.sigma > 0.0 && cfg.sigma.is_finite()) || cfg.grid_half < 1 {
        return Err(Error::Validation("sigma and grid_half must be positive".into()));
    }
    let side = 2 * cfg.grid_half as u128 + 1;
    if cfg.n as u128 + 1 > side * side {
        return Err(Error::Size {
            what: "customers on grid",
            size: cfg.n,
            cap: (side * side - 1).min(usize::MAX as u128) as usize,
        });
    }
    let normal = Normal::new(0.0, cfg.sigma).map_err(|e| Error::Validation(e.to_string()))?;
    let mut rng = rng_for(cfg.seed, &[]);
    let g = cfg.grid_half;
    let mut taken = BTreeSet::from([(0i64, 0i64)]);
    let mut coords = vec![(0, 0)];
    for _ in 0..cfg.n {
        let point = (0..MAX_ATTEMPTS)
            .map(|_| {
                let x = (normal.sample(&mut rng).round() as i64).clamp(-g, g);
                let y = (normal.sample(&mut rng).round() as i64).clamp(-g, g);
                (x, y)
            })
            .find(|p| !taken.contains(p))
            .ok_or_else(|| {
                Error::InvalidInstance(format!("no free grid point after {MAX_ATTEMPTS} draws"))
            })?;
        taken.insert(point);
        coords.push(point);
    }
    VrpInstance::new(coords, cfg.vehicles, Some(cfg.seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_clamped() {
        let cfg = GeneratorConfig::new(6, 2, 42);
        let a = generate_vrp(&cfg).unwrap();
        assert_eq!(a, generate_vrp(&cfg).unwrap());
        assert_ne!(a, generate_vrp(&GeneratorConfig::new(6, 2, 43)).unwrap());
        for seed in 0..50 {
            let inst = generate_vrp(&GeneratorConfig {
                sigma: 80.0,
                ..GeneratorConfig::new(8, 2, seed)
            })
            .unwrap();
            assert_eq!(inst.coords()[0], (0, 0));
            assert!(inst
                .coords()
                .iter()
                .all(|&(x, y)| x.abs() <= 50 && y.abs() <= 50));
            let distinct: BTreeSet<_> = inst.coords().iter().collect();
            assert_eq!(distinct.len(), 9);
        }
    }

    #[test]
    fn max_distance_is_recomputed_maximum() {
        let inst = generate_vrp(&GeneratorConfig::new(5, 1, 3)).unwrap();
        let c = inst.coords();
        let mut w = 0.0f64;
        for a in c {
            for b in c {
                let d = (((a.0 - b.0).pow(2) + (a.1 - b.1).pow(2)) as f64).sqrt();
                w = w.max(d);
            }
        }
        assert_eq!(inst.max_distance(), w);
    }

    #[test]
    fn capacity_guard() {
        let cfg = GeneratorConfig {
            grid_half: 1,
            ..GeneratorConfig::new(9, 1, 0)
        };
        assert!(generate_vrp(&cfg).is_err());
        let cfg = GeneratorConfig {
            grid_half: 1,
            sigma: 5.0,
            ..GeneratorConfig::new(8, 1, 0)
        };
        assert_eq!(generate_vrp(&cfg).unwrap().n(), 8);
    }

    #[test]
    fn json_round_trip() {
        let inst = generate_vrp(&GeneratorConfig::new(3, 2, 1)).unwrap();
        let text = serde_json::to_string(&inst).unwrap();
        assert_eq!(serde_json::from_str::<VrpInstance>(&text).unwrap(), inst);
    }
}
