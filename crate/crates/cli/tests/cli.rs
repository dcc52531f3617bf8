use std::fs;
use std::process::{Command, Output};

fn fibqca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibqca"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn basis_listing_has_fibonacci_rows() {
    let o = fibqca(&["basis", "--n", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("index,bits,wall_count"));
    assert_eq!(text.lines().count(), 1 + 123);
}

#[test]
fn cycles_cover_the_basis() {
    let o = fibqca(&["cycles", "--n", "8"]);
    assert!(o.status.success());
    let total: usize = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 47);
}

#[test]
fn invalid_config_exits_with_two() {
    assert_eq!(fibqca(&["propagation", "--n", "7"]).status.code(), Some(2));
    assert_eq!(
        fibqca(&["propagation", "--initial", "glider_bc:0+double_wall:1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(fibqca(&["sweep", "--initial", "A"]).status.code(), Some(2));
    assert_eq!(fibqca(&["no-such-scenario"]).status.code(), Some(2));
    assert_eq!(fibqca(&["run", "--preset", "fig99"]).status.code(), Some(2));
    assert_eq!(
        fibqca(&["concurrence", "--preset", "fig3"]).status.code(),
        Some(2)
    );
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = blocker.join("sub");
    let o = fibqca(&[
        "fidelity",
        "--n",
        "8",
        "--steps",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn dry_run_prints_resolved_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"n_sites": 12, "epsilon": 0.05, "initial": ["glider_bc:1"]}"#,
    )
    .unwrap();
    let o = fibqca(&[
        "propagation",
        "--config",
        cfg.to_str().unwrap(),
        "--steps",
        "9",
        "--dry-run",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("\"n_sites\": 12"));
    assert!(text.contains("\"steps\": 9"));
    assert!(text.contains("glider_bc:1"));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"n_sites": 12, "epsilonn": 0.05}"#).unwrap();
    let o = fibqca(&["propagation", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scenario_run_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = fibqca(&[
        "propagation",
        "--n",
        "10",
        "--steps",
        "6",
        "--initial",
        "A,glider_bc:0",
        "--measure",
        "q,entropy_half",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let a = fs::read_to_string(out.join("propagation_A.csv")).unwrap();
    assert!(a.starts_with("t,q,entropy_half\n"));
    assert_eq!(a.lines().count(), 8);
    assert!(out.join("propagation_glider_bc-0.csv").exists());
    let manifest = fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("wall_clock_seconds"));
    assert!(manifest.contains("\"scenario\": \"propagation\""));
}

#[test]
fn evolve_writes_requested_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    let o = fibqca(&[
        "evolve",
        "--n",
        "12",
        "--steps",
        "6",
        "--every",
        "3",
        "--initial",
        "glider_bc:0",
        "--measure",
        "q,concurrence:1,3,ipr",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,q,concurrence_1_3,ipr");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("6,"));
}

#[test]
fn presets_are_listed() {
    let o = fibqca(&["presets"]);
    let text = stdout(&o);
    for name in ["fig2", "fig6", "fig18", "fig5-desk"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn analytic_echo_starts_at_one() {
    let o = fibqca(&["echo-analytic", "--points", "3", "--z-max", "0.2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((first - 1.0).abs() < 1e-12);
}
