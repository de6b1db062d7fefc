use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use shadow_bias::table::Table;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_shadow-bias"));
    c.env_remove("SHADOW_BIAS_OUTPUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn read_table(path: &Path) -> Table {
    Table::read_from(std::fs::read(path).unwrap().as_slice()).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn loss_curve_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["loss-curve", "--r", "1", "--epsilon-grid", "0:1:11", "--output-dir", d]);
    assert!(out.status.success());
    let t = read_table(&dir.path().join("loss-curve.csv"));
    assert_eq!(t.columns, ["r", "epsilon", "loss"]);
    assert_eq!(t.rows.len(), 11);
    assert_eq!(t.config["subcommand"], "loss-curve");
    assert_eq!(t.rows[0][2].as_f64(), Some(4.0));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&[
            "best-case", "--w", "1", "--n-s", "10", "--epsilon-grid", "0:1:5", "--reps", "2000",
            "--seed", "3", "-o", p.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"subcommand":"worst-case","w":[2],"n_s":[5,50]}"#).unwrap();
    let o = dir.path().join("wc.csv");
    let out = run(&[
        "worst-case", "--config", cfg.to_str().unwrap(), "--n-s", "7", "-o", o.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_table(&o);
    let resolved = &t.config["resolved"];
    assert_eq!(resolved["w"], serde_json::json!([2]));
    assert_eq!(resolved["n_s"], serde_json::json!([7]));
    assert_eq!(resolved["epsilon_grid"], "0:0.99:100");
    assert_eq!(t.rows.len(), 100);
}

#[test]
fn config_for_another_subcommand_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"subcommand":"loss-curve"}"#).unwrap();
    let out = run(&["worst-case", "--config", cfg.to_str().unwrap(), "--output-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg, r#"{"bogus":1}"#).unwrap();
    let out = run(&["worst-case", "--config", cfg.to_str().unwrap(), "--output-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_arguments_exit_two_with_json_error() {
    for args in [
        vec![],
        vec!["worst-case", "--w", "0"],
        vec!["loss-curve", "--epsilon-grid", "0:2:3"],
        vec!["snr", "--mean", "0", "--variance", "0", "--n-s", "3"],
        vec!["density-samples", "--bloch", "1,1,1"],
        vec!["no-such-command"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr_json(&out)["message"].is_string(), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
}

#[test]
fn unwritable_output_exits_three_without_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("x.csv");
    let out = run(&["loss-curve", "-o", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["code"], 3);
    assert!(!target.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("SHADOW_BIAS_OUTPUT_DIR", dir.path())
        .args(["density-samples", "--n-points", "50"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let t = read_table(&dir.path().join("density-samples_ns100_seed0.csv"));
    assert_eq!(t.rows.len(), 50);
    assert!(t.config["circle"]["radius"].is_number());
}

#[test]
fn snr_prints_json() {
    let out = run(&["snr", "--mean", "1", "--variance", "8", "--n-s", "8"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["alpha_star"], 0.5);
    assert_eq!(v["gain"], 2.0);
    let out = run(&["snr", "--w", "2", "--expectation", "0.5", "--n-s", "100"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["variance"], 8.75);
}

#[test]
fn small_experiment_and_combined_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&[
        "experiment", "--n", "6", "--w", "3", "--n-s", "200", "--n-obs", "3", "--repetitions", "1",
        "--output-dir", d,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = read_table(&dir.path().join("experiment_n6_w3_ns200_seed0.csv"));
    assert!(t.rows.len() <= 3);
    let flag = t.columns.iter().position(|c| c == "low_statistics").unwrap();
    assert!(t.rows.iter().all(|r| r[flag].as_f64() == Some(1.0)));

    let out = run(&[
        "combined", "--n", "6", "--pauli", "ZZZZII", "--n-s", "200", "--repetitions", "20",
        "-o", dir.path().join("c.csv").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_table(&dir.path().join("c.csv")).config["subcommand"], "combined");
}
