//! The `generate` command.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use qslice::instances::{generate_vrp, route_enum_optimal, GeneratorConfig, ROUTE_ENUM_MAX_N};
use qslice::rng::derive_seed;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub count: usize,
    pub n: usize,
    pub vehicles: usize,
    pub seed: u64,
    pub sigma: f64,
    pub grid_half: i64,
    pub output_dir: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub files: Vec<String>,
}

#[derive(Debug)]
pub struct GenerateOutcome {
    pub files: Vec<PathBuf>,
    /// Human-readable summary table.
    pub table: String,
}

/// Write `count` instances (`instance_<i>.json`, seed of instance `i` is
/// `derive_seed(seed, [i])`) and a `manifest.json` listing them.
pub fn cmd_generate(cfg: &GenerateConfig) -> Result<GenerateOutcome> {
    std::fs::create_dir_all(&cfg.output_dir).map_err(BenchError::io(&cfg.output_dir))?;
    let width = cfg.count.saturating_sub(1).to_string().len().max(3);
    let mut files = Vec::new();
    let mut names = Vec::new();
    let mut table = String::from("id          n  A        W  opt_cost  opt_vehicles\n");
    for i in 0..cfg.count {
        let gen = GeneratorConfig {
            n: cfg.n,
            vehicles: cfg.vehicles,
            grid_half: cfg.grid_half,
            sigma: cfg.sigma,
            seed: derive_seed(cfg.seed, &[i as u64]),
        };
        let inst = generate_vrp(&gen).map_err(|e| BenchError::Config(e.to_string()))?;
        let name = format!("instance_{i:0width$}.json");
        let path = cfg.output_dir.join(&name);
        std::fs::write(&path, serde_json::to_string(&inst)? + "\n").map_err(BenchError::io(&path))?;
        let (cost, used) = if inst.n() <= ROUTE_ENUM_MAX_N {
            let opt = route_enum_optimal(&inst)?;
            (format!("{:.4}", opt.cost), opt.vehicles_used.to_string())
        } else {
            ("-".into(), "-".into())
        };
        let _ = writeln!(
            table,
            "{:<10} {:>2} {:>2} {:>8.3} {:>9} {:>13}",
            name.trim_end_matches(".json"),
            inst.n(),
            inst.vehicles(),
            inst.max_distance(),
            cost,
            used
        );
        files.push(path);
        names.push(name);
    }
    let manifest = Manifest {
        seed: cfg.seed,
        files: names,
    };
    let path = cfg.output_dir.join(crate::config::MANIFEST_FILE);
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n").map_err(BenchError::io(&path))?;
    Ok(GenerateOutcome { files, table })
}
