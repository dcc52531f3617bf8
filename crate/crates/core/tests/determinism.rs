use std::fs;
use std::path::Path;

use fibqca::harness::{run_scenario, ExperimentConfig, Scenario};

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

fn run_twice(mut cfg: ExperimentConfig, threads: [Option<usize>; 2]) {
    let dir = tempfile::tempdir().unwrap();
    let mut results = Vec::new();
    for (i, t) in threads.into_iter().enumerate() {
        cfg.output_dir = dir.path().join(format!("run{i}"));
        cfg.threads = t;
        run_scenario(&cfg).unwrap();
        results.push(csv_files(&cfg.output_dir));
    }
    assert!(!results[0].is_empty());
    assert_eq!(results[0], results[1], "{}", cfg.scenario);
}

#[test]
fn sweep_output_is_independent_of_thread_count() {
    let mut cfg = ExperimentConfig::new(Scenario::Sweep);
    cfg.n_sites = 12;
    cfg.steps = 40;
    cfg.epsilon = 0.05;
    cfg.initial = vec!["ALL".into()];
    run_twice(cfg.clone(), [Some(1), Some(4)]);
    run_twice(cfg, [None, None]);
}

#[test]
fn reruns_are_byte_identical() {
    let mut cfg = ExperimentConfig::new(Scenario::Propagation);
    cfg.n_sites = 14;
    cfg.steps = 30;
    cfg.initial = vec!["A".into(), "glider_bc:2".into(), "double_wall:7".into()];
    cfg.measure = vec!["tangle_profile,q,entropy_half,ipr".into()];
    run_twice(cfg, [None, None]);

    let mut cfg = ExperimentConfig::new(Scenario::Loschmidt);
    cfg.n_sites = 12;
    cfg.steps = 20;
    cfg.z_points = 11;
    run_twice(cfg, [None, None]);
}

#[test]
fn manifest_records_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(Scenario::Fidelity);
    cfg.n_sites = 10;
    cfg.steps = 9;
    cfg.output_dir = dir.path().to_path_buf();
    let report = run_scenario(&cfg).unwrap();
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(report.manifest).unwrap()).unwrap();
    assert_eq!(manifest["parameters"]["n_sites"], 10);
    assert_eq!(manifest["parameters"]["steps"], 9);
    assert_eq!(manifest["files"][0], "fidelity_A.csv");
    assert!(manifest["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
    assert!(manifest["version"].is_string());
}
