//! The `report` command: per-(algorithm, p) ratio statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::record::{write_csv, ExperimentRecord};

/// Ratio distribution of one (algorithm, p) group. Classical baselines are
/// reported once per instance under `baseline-route-enum` and
/// `baseline-nn-2opt` with `p = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub algorithm: String,
    pub p: usize,
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
}

/// One point of the plot data (`plot_ratios.csv`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub algorithm: String,
    pub p: usize,
    pub instance_id: String,
    pub ratio: f64,
}

#[derive(Debug, Default)]
pub struct ReportOutcome {
    pub summary: Vec<GroupSummary>,
    pub points: Vec<RatioPoint>,
    /// `(line, error)` of rows that failed to parse.
    pub malformed: Vec<(u64, String)>,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(points: &[RatioPoint]) -> Vec<GroupSummary> {
    let mut groups: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    for pt in points {
        groups.entry((pt.algorithm.clone(), pt.p)).or_default().push(pt.ratio);
    }
    groups
        .into_iter()
        .map(|((algorithm, p), mut v)| {
            v.sort_by(f64::total_cmp);
            GroupSummary {
                algorithm,
                p,
                count: v.len(),
                mean: v.iter().sum::<f64>() / v.len() as f64,
                median: quantile(&v, 0.5),
                q1: quantile(&v, 0.25),
                q3: quantile(&v, 0.75),
                min: v[0],
                max: v[v.len() - 1],
            }
        })
        .collect()
}

/// Ratio points of successful records plus one baseline point per instance.
pub fn ratio_points(records: &[ExperimentRecord]) -> Vec<RatioPoint> {
    let mut points = Vec::new();
    let mut seen = BTreeSet::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        if let Some(ratio) = r.ratio {
            points.push(RatioPoint {
                algorithm: r.algorithm.clone(),
                p: r.p,
                instance_id: r.instance_id.clone(),
                ratio,
            });
        }
    }
    for r in records {
        if !seen.insert(r.instance_id.clone()) {
            continue;
        }
        for (name, value) in [
            ("baseline-route-enum", r.baseline_route_enum_ratio),
            ("baseline-nn-2opt", r.baseline_heuristic_ratio),
        ] {
            if let Some(ratio) = value {
                points.push(RatioPoint {
                    algorithm: name.into(),
                    p: 0,
                    instance_id: r.instance_id.clone(),
                    ratio,
                });
            }
        }
    }
    points.sort_by(|a, b| {
        (&a.algorithm, a.p, &a.instance_id).cmp(&(&b.algorithm, b.p, &b.instance_id))
    });
    points
}

/// Read `results.csv`, drop malformed rows, and write `summary.csv` and
/// `plot_ratios.csv` into `out_dir`.
pub fn cmd_report(input: &Path, out_dir: &Path) -> Result<ReportOutcome> {
    let file = std::fs::File::open(input).map_err(BenchError::io(input))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    for row in reader.deserialize::<ExperimentRecord>() {
        match row {
            Ok(r) => records.push(r),
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                malformed.push((line, e.to_string()));
            }
        }
    }
    let points = ratio_points(&records);
    let summary = summarize(&points);
    std::fs::create_dir_all(out_dir).map_err(BenchError::io(out_dir))?;
    write_csv(
        &out_dir.join("summary.csv"),
        &["algorithm", "p", "count", "mean", "median", "q1", "q3", "min", "max"],
        &summary,
    )?;
    write_csv(
        &out_dir.join("plot_ratios.csv"),
        &["algorithm", "p", "instance_id", "ratio"],
        &points,
    )?;
    Ok(ReportOutcome {
        summary,
        points,
        malformed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(alg: &str, p: usize, r: f64) -> RatioPoint {
        RatioPoint {
            algorithm: alg.into(),
            p,
            instance_id: format!("{r}"),
            ratio: r,
        }
    }

    #[test]
    fn quartiles_and_bounds() {
        let s = summarize(&[pt("a", 1, 0.1), pt("a", 1, 0.4), pt("a", 1, 0.2), pt("a", 1, 0.3)]);
        assert_eq!(s.len(), 1);
        let g = &s[0];
        assert!((g.median - 0.25).abs() < 1e-12);
        assert!((g.q1 - 0.175).abs() < 1e-12);
        assert!(g.min <= g.median && g.median <= g.max);
        assert!((g.mean - 0.25).abs() < 1e-12);
    }

    #[test]
    fn empty_input() {
        assert!(summarize(&[]).is_empty());
    }
}
