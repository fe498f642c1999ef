//! Experiment configuration: one TOML file plus command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qslice::model::VrpInstance;
use qslice::trainer::TrainingConfig;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "qaoa")]
    Qaoa,
    #[serde(rename = "pqaoa-multi")]
    PqaoaMulti,
    #[serde(rename = "pqaoa-single")]
    PqaoaSingle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Self::Qaoa, Self::PqaoaMulti, Self::PqaoaSingle];

    pub fn name(self) -> &'static str {
        match self {
            Self::Qaoa => "qaoa",
            Self::PqaoaMulti => "pqaoa-multi",
            Self::PqaoaSingle => "pqaoa-single",
        }
    }

    /// Stable counter used in seed derivation.
    pub fn code(self) -> u64 {
        match self {
            Self::Qaoa => 0,
            Self::PqaoaMulti => 1,
            Self::PqaoaSingle => 2,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown algorithm {s:?}")))
    }
}

/// Keys of the `run` / `transfer` configuration file.
///
/// ```toml
/// seed = 7
/// output_dir = "results"
/// instances = ["instances/*.json"]
/// algorithms = ["qaoa", "pqaoa-multi", "pqaoa-single"]
/// p_range = [1, 2, 3]
/// final_samples = 10000
/// warm_start = true
///
/// [[inline_instances]]
/// coords = [[0, 0], [3, 4], [-2, 5]]
/// A = 2
///
/// [training]
/// optimizer = "nelder-mead"
/// max_iters = 100
/// subsamples_per_slice = 100
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Master seed; every task seed is derived from it.
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Glob patterns of instance JSON files, relative to the config file.
    pub instances: Vec<String>,
    pub inline_instances: Vec<VrpInstance>,
    pub algorithms: Vec<Algorithm>,
    pub p_range: Vec<usize>,
    /// Size of the final sampling pass after training.
    pub final_samples: u64,
    /// Start layer `p` from the trained `p − 1` angles plus a zero layer.
    pub warm_start: bool,
    pub training: TrainingConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            output_dir: PathBuf::from("results"),
            instances: Vec::new(),
            inline_instances: Vec::new(),
            algorithms: Algorithm::ALL.to_vec(),
            p_range: (1..=6).collect(),
            final_samples: 10_000,
            warm_start: true,
            training: TrainingConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(BenchError::io(path))?;
        let mut cfg: Self = toml::from_str(&text).map_err(|source| BenchError::Toml {
            path: path.to_path_buf(),
            source,
        })?;
        if let Some(base) = path.parent() {
            cfg.instances = cfg
                .instances
                .iter()
                .map(|g| {
                    if Path::new(g).is_absolute() {
                        g.clone()
                    } else {
                        base.join(g).to_string_lossy().into_owned()
                    }
                })
                .collect();
            if cfg.output_dir.is_relative() {
                cfg.output_dir = base.join(&cfg.output_dir);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() {
            return Err(BenchError::Config("algorithm set is empty".into()));
        }
        if self.p_range.is_empty() || self.p_range.contains(&0) {
            return Err(BenchError::Config("p_range must be non-empty with p ≥ 1".into()));
        }
        if self.final_samples == 0 {
            return Err(BenchError::Config("final_samples must be positive".into()));
        }
        for &p in &self.p_range {
            self.training
                .validate(p)
                .map_err(|e| BenchError::Config(e.to_string()))?;
        }
        Ok(())
    }

    /// Load every instance: inline ones first (`inline-<i>`), then glob
    /// matches sorted by path (named by file stem).
    pub fn load_instances(&self) -> Result<Vec<(String, VrpInstance)>> {
        let mut out: Vec<(String, VrpInstance)> = self
            .inline_instances
            .iter()
            .enumerate()
            .map(|(i, inst)| (format!("inline-{i}"), inst.clone()))
            .collect();
        let mut paths = Vec::new();
        for pattern in &self.instances {
            let matches = glob::glob(pattern)
                .map_err(|e| BenchError::Config(format!("bad glob {pattern:?}: {e}")))?;
            for entry in matches {
                paths.push(entry.map_err(|e| BenchError::Config(e.to_string()))?);
            }
        }
        // The generator's index file sits next to the instances.
        paths.retain(|p| p.file_name().is_none_or(|f| f != MANIFEST_FILE));
        paths.sort();
        paths.dedup();
        for path in paths {
            let text = std::fs::read_to_string(&path).map_err(BenchError::io(&path))?;
            let inst: VrpInstance = serde_json::from_str(&text)
                .map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            out.push((id, inst));
        }
        let mut ids: Vec<&String> = out.iter().map(|(id, _)| id).collect();
        ids.sort();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(BenchError::Config("duplicate instance ids".into()));
        }
        Ok(out)
    }
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Parse `"1..3"`, `"1..=3"` (both inclusive) or `"1,2,5"`.
pub fn parse_p_range(text: &str) -> Result<Vec<usize>> {
    let bad = || BenchError::Config(format!("bad p range {text:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = text.split_once("..") {
        // Both forms are inclusive: "1..6" means p = 1, ..., 6.
        let (lo, hi) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(num).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_range_forms() {
        assert_eq!(parse_p_range("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_p_range("2..=4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_p_range("1,3").unwrap(), vec![1, 3]);
        assert!(parse_p_range("0..2").is_err());
        assert!(parse_p_range("x").is_err());
    }

    #[test]
    fn toml_keys() {
        let cfg: ExperimentConfig = toml::from_str(
            r#"
            seed = 3
            algorithms = ["qaoa"]
            p_range = [1, 2]
            [[inline_instances]]
            coords = [[0, 0], [3, 4]]
            A = 2
            [training]
            max_iters = 7
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.algorithms, vec![Algorithm::Qaoa]);
        assert_eq!(cfg.training.max_iters, 7);
        assert_eq!(cfg.training.subsamples_per_slice, 100);
        assert_eq!(cfg.inline_instances[0].vehicles(), 2);
        cfg.validate().unwrap();
        assert!(toml::from_str::<ExperimentConfig>("bogus = 1").is_err());
        let empty = ExperimentConfig {
            algorithms: vec![],
            ..ExperimentConfig::default()
        };
        assert!(empty.validate().is_err());
    }
}
