//! Binary-level contract: exit codes, witness recording, determinism,
//! and seed plumbing. Criterion line printed by the last test.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str], config: &str) -> Output {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(config.as_bytes()).unwrap();
    Command::new(env!("CARGO_BIN_EXE_nfoldsusy"))
        .args(args)
        .arg("--config")
        .arg(file.path())
        .output()
        .unwrap()
}

const QUADRATIC: &str = r#"
[family]
preset = "quadratic"
[fold]
N_min = 1
N_max = 3
"#;

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

/// The report with the timestamp blanked, for determinism comparisons.
fn stable(mut v: serde_json::Value) -> serde_json::Value {
    v["header"]["timestamp"] = serde_json::Value::Null;
    v
}

#[test]
fn passing_pipeline_exits_zero() {
    let out = run(&["check", "intertwine", "mother"], QUADRATIC);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["schema_version"], 1);
    assert!(report["checks"].as_array().unwrap().len() >= 9);
}

#[test]
fn failing_family_exits_one_with_witness() {
    let config = r#"
[family]
W = "q^3"
E = "0"
[fold]
N = 2
"#;
    let out = run(&["intertwine"], config);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    let checks = report["checks"].as_array().unwrap();
    let failed: Vec<_> = checks.iter().filter(|c| c["verdict"] == "fail").collect();
    assert!(!failed.is_empty());
    // A failed check must carry a concrete witness point and value.
    assert!(failed[0]["witness"]["q"].is_number(), "witness: {}", failed[0]);
}

#[test]
fn malformed_expression_exits_two() {
    let config = r#"
[family]
W = "q+*2"
E = "0"
"#;
    let out = run(&["check"], config);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("q+*2") || err.to_lowercase().contains("expression"), "{err}");
}

#[test]
fn unknown_command_exits_two() {
    let out = run(&["frobnicate"], QUADRATIC);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_and_seed_is_plumbed() {
    let config = r#"
[family]
preset = "cubic"
[fold]
N = 2
[verify]
seed = 7
"#;
    let a = run(&["check", "intertwine", "mother", "kernels"], config);
    let b = run(&["check", "intertwine", "mother", "kernels"], config);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stable(stdout_json(&a)), stable(stdout_json(&b)));
    assert_eq!(stdout_json(&a)["header"]["seed"], 7);

    // The command-line seed overrides the config seed.
    let c = run(&["check", "--seed", "99"], config);
    assert_eq!(stdout_json(&c)["header"]["seed"], 99);

    println!("criterion 9 (CLI exit codes, witnesses, determinism): pass");
}
