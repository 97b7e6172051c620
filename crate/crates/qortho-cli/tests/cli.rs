//! End-to-end tests of the qortho binary: output shapes, exit codes,
//! determinism, and the documented contract.

use std::process::{Command, Output};

fn qortho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qortho"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        !out.stdout.is_empty(),
        "no stdout; stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn compute_classical_mean_shift() {
    let out = qortho(&[
        "compute", "--family", "classical", "--p", "1/3", "--N", "6", "--index", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["coefficients"], serde_json::json!(["-2", "1"]));
    assert_eq!(doc["result"]["paths_agree"], serde_json::json!(true));
    assert_eq!(doc["params"]["family"], serde_json::json!("classical"));
}

#[test]
fn compute_zero_index_is_one() {
    let out = qortho(&[
        "compute", "--family", "q", "--v", "2", "--p", "1/3", "--N", "4", "--index", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["coefficients"], serde_json::json!(["1"]));
}

#[test]
fn compute_q_r2_agreement() {
    let out = qortho(&[
        "compute", "--family", "q", "--v", "2", "--p", "1/3,1/2", "--N", "4", "--index", "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(
        doc["result"]["coefficients"],
        serde_json::json!(["4480/3", "-5203/51", "1"])
    );
    assert_eq!(doc["result"]["paths_agree"], serde_json::json!(true));
}

#[test]
fn compute_csv_table() {
    let out = qortho(&[
        "compute", "--family", "classical", "--p", "1/3", "--N", "6", "--index", "1", "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "power,coefficient\n0,-2\n1,1\n");
}

#[test]
fn deterministic_output() {
    let args = [
        "compute", "--family", "q", "--v", "5/4", "--p", "1/5,1/2", "--N", "6", "--index", "2,1",
    ];
    let a = qortho(&args);
    let b = qortho(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn coefficients_round_trip() {
    let out = qortho(&[
        "compute", "--family", "q", "--v", "2", "--p", "1/3,1/2", "--N", "4", "--index", "1,1",
    ]);
    let doc = stdout_json(&out);
    for c in doc["result"]["coefficients"].as_array().unwrap() {
        let s = c.as_str().unwrap();
        let parsed = qortho::scalar::parse_rat(s).expect("parses back");
        assert_eq!(parsed.to_string(), s);
    }
}

#[test]
fn invalid_input_exits_2() {
    // Duplicate p values.
    let out = qortho(&[
        "compute", "--family", "q", "--v", "2", "--p", "1/3,1/3", "--N", "4", "--index", "1,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("p[0] equals p[1]"), "stderr: {err}");
    // v = 1 is rejected with the field named.
    let out = qortho(&[
        "compute", "--family", "q", "--v", "1", "--p", "1/3", "--N", "4", "--index", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`v`"));
    // Malformed rational.
    let out = qortho(&[
        "compute", "--family", "q", "--v", "2", "--p", "abc", "--N", "4", "--index", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`p`"));
    // Index/measure mismatch.
    let out = qortho(&[
        "compute", "--family", "q", "--v", "2", "--p", "1/3,1/2", "--N", "4", "--index", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown family.
    let out = qortho(&[
        "compute", "--family", "jacobi", "--p", "1/3", "--N", "4", "--index", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_passes_for_clean_case() {
    let out = qortho(&[
        "verify", "--family", "q", "--v", "2", "--p", "1/3,1/2", "--N", "4", "--index", "1,1",
        "--checks", "orthogonality,rodrigues,raising,lowering,zeros",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["all_passed"], serde_json::json!(true));
    assert_eq!(doc["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_diffeq_fails_with_exit_1() {
    let out = qortho(&[
        "verify", "--family", "q", "--v", "2", "--p", "1/3,1/2", "--N", "5", "--index", "1,1",
        "--checks", "diffeq", "--convention", "both",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["all_passed"], serde_json::json!(false));
    let notes = doc["checks"][0]["notes"].to_string();
    assert!(notes.contains("no m-convention"), "notes: {notes}");
}

#[test]
fn verify_classical_checks() {
    let out = qortho(&[
        "verify", "--family", "classical", "--p", "1/4,1/2", "--N", "5", "--index", "1,1",
        "--checks", "all",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        vec!["orthogonality", "rodrigues", "diffeq", "recurrence", "zeros"]
    );
}

#[test]
fn verify_trivial_index_reports_vacuous() {
    let out = qortho(&[
        "verify", "--family", "q", "--v", "2", "--p", "1/3", "--N", "4", "--index", "0",
        "--checks", "orthogonality,lowering",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let text = doc["checks"].to_string();
    assert!(text.contains("trivially satisfied"), "checks: {text}");
}

#[test]
fn verify_worker_env_validation() {
    let out = Command::new(env!("CARGO_BIN_EXE_qortho"))
        .args([
            "verify", "--family", "classical", "--p", "1/4,1/2", "--N", "5", "--index", "1,1",
            "--checks", "recurrence",
        ])
        .env("QORTHO_NUM_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_qortho"))
        .args([
            "verify", "--family", "classical", "--p", "1/4,1/2", "--N", "5", "--index", "1,1",
        ])
        .env("QORTHO_NUM_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zeros_classical_exact_point() {
    let out = qortho(&[
        "zeros", "--family", "classical", "--p", "1/3", "--N", "6", "--index", "1",
        "--precision", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["isolated_roots"], serde_json::json!(1));
    assert_eq!(doc["result"]["intervals"][0], serde_json::json!(["2", "2"]));
    assert_eq!(doc["result"]["decimals"][0], serde_json::json!("2.0000"));
}

#[test]
fn zeros_constant_empty_and_q_case_two_positive() {
    let out = qortho(&[
        "zeros", "--family", "q", "--v", "2", "--p", "1/3", "--N", "4", "--index", "0",
        "--precision", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["isolated_roots"], serde_json::json!(0));

    let out = qortho(&[
        "zeros", "--family", "q", "--v", "2", "--p", "1/3,1/2", "--N", "4", "--index", "1,1",
        "--precision", "6", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,lower,upper,decimal");
    assert_eq!(lines.len(), 3);
}

#[test]
fn zeros_rejects_precision_zero() {
    let out = qortho(&[
        "zeros", "--family", "classical", "--p", "1/3", "--N", "6", "--index", "1",
        "--precision", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn limit_acceptance_case_passes() {
    let out = qortho(&[
        "limit", "--family", "classical", "--p", "1/4,1/2", "--N", "6", "--index", "1,1",
        "--delta", "1/8", "--steps", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["pass"], serde_json::json!(true));
    assert_eq!(doc["result"]["table"].as_array().unwrap().len(), 5);
    assert_eq!(doc["result"]["table"][0]["v"], serde_json::json!("17/16"));
}

#[test]
fn limit_single_step_informational() {
    let out = qortho(&[
        "limit", "--family", "classical", "--p", "1/3", "--N", "4", "--index", "1",
        "--delta", "1/8", "--steps", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["informational"], serde_json::json!(true));
    assert!(doc["result"]["table"][0]["ratio"].is_null());
}

#[test]
fn limit_rejects_negative_delta() {
    let out = qortho(&[
        "limit", "--family", "classical", "--p", "1/3", "--N", "4", "--index", "1",
        "--delta", "-1/8", "--steps", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("qortho-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.conf");
    std::fs::write(
        &path,
        "# sample job\nfamily=classical\np=1/3\nN=6\nindex=2\n",
    )
    .unwrap();
    let out = qortho(&["compute", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["params"]["index"], serde_json::json!([2]));
    // Flag wins over the config value.
    let out = qortho(&[
        "compute", "--config", path.to_str().unwrap(), "--index", "1",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["params"]["index"], serde_json::json!([1]));
    assert_eq!(doc["result"]["coefficients"], serde_json::json!(["-2", "1"]));
    // Unknown config key is a diagnostic.
    std::fs::write(&path, "famly=q\n").unwrap();
    let out = qortho(&["compute", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("qortho-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("result.json");
    let out = qortho(&[
        "compute", "--family", "classical", "--p", "1/3", "--N", "6", "--index", "1", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["result"]["coefficients"], serde_json::json!(["-2", "1"]));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_csv_is_rejected() {
    let out = qortho(&[
        "verify", "--family", "classical", "--p", "1/4,1/2", "--N", "5", "--index", "1,1",
        "--checks", "recurrence", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
