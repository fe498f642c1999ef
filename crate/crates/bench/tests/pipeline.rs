use std::path::Path;

use qslice::model::VrpInstance;
use qslice_bench::{
    cmd_generate, cmd_report, cmd_run, cmd_transfer, Algorithm, ExperimentConfig, GenerateConfig,
};

fn gen_config(dir: &Path, count: usize) -> GenerateConfig {
    GenerateConfig {
        count,
        n: 2,
        vehicles: 2,
        seed: 3,
        sigma: 20.0,
        grid_half: 50,
        output_dir: dir.to_path_buf(),
    }
}

#[test]
fn generate_zero_writes_empty_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmd_generate(&gen_config(dir.path(), 0)).unwrap();
    assert!(out.files.is_empty());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["files"], serde_json::json!([]));
}

#[test]
fn generated_instances_round_trip_and_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let out = cmd_generate(&gen_config(a.path(), 3)).unwrap();
    cmd_generate(&gen_config(b.path(), 3)).unwrap();
    for file in &out.files {
        let name = file.file_name().unwrap();
        let text = std::fs::read_to_string(file).unwrap();
        assert_eq!(text, std::fs::read_to_string(b.path().join(name)).unwrap());
        let inst: VrpInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_value(&inst).unwrap(), serde_json::from_str::<serde_json::Value>(&text).unwrap());
        assert_eq!((inst.n(), inst.vehicles()), (2, 2));
    }
}

#[test]
fn toml_config_drives_run_and_report() {
    let dir = tempfile::tempdir().unwrap();
    cmd_generate(&gen_config(&dir.path().join("inst"), 2)).unwrap();
    let toml = r#"
seed = 4
output_dir = "out"
instances = ["inst/*.json"]
algorithms = ["pqaoa-single"]
p_range = [1]
final_samples = 400

[training]
max_iters = 5
"#;
    let path = dir.path().join("exp.toml");
    std::fs::write(&path, toml).unwrap();
    let cfg = ExperimentConfig::load(&path).unwrap();
    assert_eq!(cfg.algorithms, vec![Algorithm::PqaoaSingle]);
    assert_eq!(cfg.output_dir, dir.path().join("out"));

    let run = cmd_run(&cfg).unwrap();
    assert_eq!(run.records.len(), 2);
    assert_eq!(run.skipped(), 0);
    for r in &run.records {
        assert!(r.final_samples.unwrap() >= 400);
        let ratio = r.ratio.unwrap();
        assert!(ratio > 0.0 && ratio <= 1.0);
        assert!(dir.path().join("out").join(&r.trace_file).exists());
    }

    let report = cmd_report(&dir.path().join("out/results.csv"), &dir.path().join("out")).unwrap();
    assert!(report.malformed.is_empty());
    assert!(report.summary.iter().any(|g| g.algorithm == "pqaoa-single" && g.count == 2));
    assert!(dir.path().join("out/summary.csv").exists());
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "seed = 1\nshots = 5\n").unwrap();
    assert!(ExperimentConfig::load(&path).is_err());
}

#[test]
fn report_on_header_only_csv_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let header = qslice_bench::record::RECORD_HEADER.join(",");
    std::fs::write(dir.path().join("results.csv"), header + "\n").unwrap();
    let out = cmd_report(&dir.path().join("results.csv"), dir.path()).unwrap();
    assert!(out.summary.is_empty());
    assert!(out.malformed.is_empty());
}

#[test]
fn report_lists_malformed_rows() {
    let dir = tempfile::tempdir().unwrap();
    let header = qslice_bench::record::RECORD_HEADER.join(",");
    std::fs::write(dir.path().join("results.csv"), format!("{header}\nnot,a,record\n")).unwrap();
    let out = cmd_report(&dir.path().join("results.csv"), dir.path()).unwrap();
    assert_eq!(out.malformed.len(), 1);
}

#[test]
fn transfer_without_traces_skips_every_item() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        output_dir: dir.path().to_path_buf(),
        inline_instances: vec![VrpInstance::new(vec![(0, 0), (3, 4), (-2, 5)], 2, None).unwrap()],
        p_range: vec![1, 2],
        ..ExperimentConfig::default()
    };
    let out = cmd_transfer(&cfg).unwrap();
    assert_eq!(out.records.len(), 4);
    assert_eq!(out.skipped(), 4);
    assert!(out.records.iter().all(|r| r.skip_reason.starts_with("missing trace")));
}
