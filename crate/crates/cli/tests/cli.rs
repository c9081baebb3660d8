//! End-to-end tests of the `qwopt` binary: exit codes, artifact layout,
//! seed precedence, and stdout discipline.

use std::path::Path;
use std::process::{Command, Output};

fn qwopt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwopt"))
        .args(args)
        .current_dir(dir)
        // Keep ambient state out of the picture unless a test sets it.
        .env_remove("QWOPT_SEED")
        .output()
        .expect("spawn qwopt")
}

fn manifest(dir: &Path, out: &str) -> serde_json::Value {
    let bytes = std::fs::read(dir.join(out).join("manifest.json")).unwrap();
    serde_json::from_slice(&bytes).unwrap()
}

#[test]
fn optimize_defaults_produce_artifacts_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwopt(dir.path(), &["optimize", "--seed", "7", "--out", "run"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("artifacts:"), "stdout: {stdout}");
    assert!(stdout.contains("wall time:"), "stdout: {stdout}");

    let traj = std::fs::read_to_string(dir.path().join("run/trajectory.csv")).unwrap();
    assert!(traj.starts_with("iteration,energy\n"));

    let m = manifest(dir.path(), "run");
    assert_eq!(m["tool"], "qwopt");
    assert_eq!(m["task"], "optimize");
    assert_eq!(m["objective"], "quadratic");
    assert_eq!(m["method"], "bfgs");
    assert_eq!(m["seed"], 7);
    assert_eq!(m["artifacts"], serde_json::json!(["trajectory.csv"]));
    assert!(m["result"]["best_value"].is_number());
    assert!(m.get("error").is_none());
    // The manifest must not embed where it was written or how long it took.
    assert!(m.get("out").is_none());
    assert!(m.get("wall_time").is_none());
}

#[test]
fn quiet_suppresses_stdout_entirely() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwopt(dir.path(), &["optimize", "--quiet", "--out", "run"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_task_objective_combination_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwopt(dir.path(), &["optimize", "--objective", "qwdevice"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.starts_with("error:"), "stderr: {stderr}");
}

#[test]
fn ljmin_rejects_the_damped_method() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwopt(dir.path(), &["ljmin", "--method", "damped"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_over_the_enumeration_cap_is_rejected_up_front() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwopt(dir.path(), &["oracle", "--bits-per-param", "7"]);
    assert_eq!(out.status.code(), Some(2));
    // Nothing was enumerated, so nothing was written.
    assert!(!dir.path().join("qwopt-out").exists());
}

#[test]
fn malformed_env_seed_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qwopt"))
        .args(["optimize", "--out", "run"])
        .current_dir(dir.path())
        .env("QWOPT_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_task_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), "task = \"anneal\"\n").unwrap();
    let out = qwopt(dir.path(), &["optimize", "--config", "c.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), "task = \"optimize\"\ntypo = 1\n").unwrap();
    let out = qwopt(dir.path(), &["optimize", "--config", "c.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_divergence_exits_3_and_still_writes_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    // A fixed step far too large for the Rosenbrock valley, with
    // backtracking disabled, blows the iterates up to non-finite energy.
    std::fs::write(
        dir.path().join("c.toml"),
        "task = \"optimize\"\nobjective = \"rosenbrock\"\nmethod = \"sdm\"\n\n[local]\nlambda = 5.0\nuse_backtracking = false\n",
    )
    .unwrap();
    let out = qwopt(dir.path(), &["optimize", "--config", "c.toml", "--out", "run"]);
    assert_eq!(out.status.code(), Some(3));

    let m = manifest(dir.path(), "run");
    assert!(m["error"].as_str().unwrap().contains("non-finite"));
    assert!(m.get("result").is_none());
}

#[test]
fn seed_precedence_is_env_then_flag_then_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), "task = \"optimize\"\nseed = 3\n").unwrap();

    let out = qwopt(
        dir.path(),
        &["optimize", "--config", "c.toml", "--seed", "5", "--out", "a"],
    );
    assert!(out.status.success());
    assert_eq!(manifest(dir.path(), "a")["seed"], 5);

    let out = Command::new(env!("CARGO_BIN_EXE_qwopt"))
        .args(["optimize", "--config", "c.toml", "--seed", "5", "--out", "b"])
        .current_dir(dir.path())
        .env("QWOPT_SEED", "9")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(manifest(dir.path(), "b")["seed"], 9);

    let out = qwopt(dir.path(), &["optimize", "--config", "c.toml", "--out", "c"]);
    assert!(out.status.success());
    assert_eq!(manifest(dir.path(), "c")["seed"], 3);
}

#[test]
fn evolve_writes_generation_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwopt(dir.path(), &["evolve", "--seed", "1", "--out", "run", "--quiet"]);
    assert!(out.status.success());

    let gens = std::fs::read_to_string(dir.path().join("run/generations.csv")).unwrap();
    let mut lines = gens.lines();
    assert_eq!(lines.next().unwrap(), "generation,best,mean");
    assert_eq!(lines.count(), 101); // initial population plus 100 generations

    let m = manifest(dir.path(), "run");
    assert_eq!(m["task"], "evolve");
    assert_eq!(m["objective"], "qwdevice");
    assert_eq!(m["method"], "ga");
    assert!(m["result"]["best_fitness"].is_number());
}

#[test]
fn ljmin_writes_a_parseable_xyz_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwopt(
        dir.path(),
        &["ljmin", "--n-atoms", "4", "--seed", "2", "--out", "run", "--quiet"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let xyz = std::fs::read_to_string(dir.path().join("run/final.xyz")).unwrap();
    let lines: Vec<&str> = xyz.lines().collect();
    assert_eq!(lines[0], "4");
    assert!(lines[1].starts_with("energy ="));
    assert_eq!(lines.len(), 2 + 4);
    for atom in &lines[2..] {
        let cols: Vec<&str> = atom.split_whitespace().collect();
        assert_eq!(cols[0], "LJ");
        for c in &cols[1..] {
            c.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn gradcheck_reports_per_sample_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwopt(
        dir.path(),
        &["gradcheck", "--objective", "lj", "--seed", "6", "--out", "run", "--quiet"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.path().join("run/gradcheck.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "sample,rel_err");
    for line in lines {
        let (_, err) = line.split_once(',').unwrap();
        assert!(err.parse::<f64>().unwrap() <= 1e-4);
    }
}
