//! End-to-end tests of the binary: flags, exit codes, golden outputs,
//! determinism, and schema validation of every JSON payload.

use std::process::{Command, Output};

fn hermprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermprod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn schema_for(name: &str) -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schemas/");
    let raw = std::fs::read_to_string(format!("{path}{name}")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&raw).unwrap();
    jsonschema::validator_for(&doc).unwrap()
}

fn assert_valid(schema: &jsonschema::Validator, payload: &str) {
    let v: serde_json::Value = serde_json::from_str(payload).unwrap();
    if let Err(err) = schema.validate(&v) {
        panic!("schema violation: {err}; payload {payload}");
    }
}

#[test]
fn w4_float_golden() {
    let out = hermprod(&["w4", "0", "0", "0", "0", "--format", "float"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("1.2533141373155003"), "{text}");
    assert_valid(&schema_for("value-record.schema.json"), text.trim());
}

#[test]
fn w4_exact_golden() {
    let out = hermprod(&["w4", "1", "1", "1", "1", "--format", "exact"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("+(3/4)*sqrt(pi*(1/2))"), "{text}");
    assert_valid(&schema_for("value-record.schema.json"), text.trim());
}

#[test]
fn w4_parity_zero() {
    let out = hermprod(&["w4", "1", "0", "0", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["results"]["float"], 0.0);
}

#[test]
fn w4_unit_convention_divides_by_pi() {
    let paper = hermprod(&["w4", "2", "2", "1", "1", "--format", "float"]);
    let unit = hermprod(&["w4", "2", "2", "1", "1", "--format", "float", "--convention", "unit"]);
    let vp: serde_json::Value = serde_json::from_str(stdout_str(&paper).trim()).unwrap();
    let vu: serde_json::Value = serde_json::from_str(stdout_str(&unit).trim()).unwrap();
    let ratio = vp["results"]["float"].as_f64().unwrap() / vu["results"]["float"].as_f64().unwrap();
    assert!((ratio - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_2() {
    let out = hermprod(&["w4", "1", "-3", "0", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hermprod(&["verify", "--tol", "banana"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hermprod(&["verify", "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hermprod(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_small_sweep_passes() {
    let out = hermprod(&["verify", "--max-sum", "12", "--tol", "1e-10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_valid(&schema_for("verify-summary.schema.json"), text.trim());
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert!(v["max_rel_deviation"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn verify_single_tuple() {
    let out = hermprod(&["verify", "--max-sum", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(v["tuples_checked"], 1);
    assert!(v["max_rel_deviation"].as_f64().unwrap() < 1e-13);
}

#[test]
fn bounds_stream_and_fit() {
    let out = hermprod(&["bounds", "--p", "0", "--q", "0", "--jkmax", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let schema = schema_for("bound-report.schema.json");
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 100);
    for line in &lines {
        assert_valid(&schema, line);
    }
    let last: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    let c = last["fitted"]["c"].as_f64().unwrap();
    assert!(c > 0.7 && c <= 1.0 + 1e-9, "C_00 = {c}");
    assert!(last["fitted"]["a"].is_null());
    // every streamed report holds with the fitted constant
    for line in &lines[..lines.len() - 1] {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["ok_tier1"], true, "{line}");
        assert_eq!(v["ok_tier3"], true, "{line}");
        assert_ne!(v["ok_tier2"], false, "{line}");
    }
}

#[test]
fn bounds_degenerate_grid_ok() {
    // Nothing admissible to stream; just the (vacuous) fitted line.
    let out = hermprod(&["bounds", "--p", "0", "--q", "0", "--jkmax", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    assert_valid(&schema_for("bound-report.schema.json"), lines[0]);
}

#[test]
fn bounds_budget_exit_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_hermprod"))
        .args(["bounds", "--p", "0", "--q", "0", "--jkmax", "2000"])
        .env("HERMPROD_MAX_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_grid_with_parity_zeros() {
    let out = hermprod(&["table", "--jmax", "4", "--p", "0", "--q", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "j,p,q,k,W_float,W_exact,provenance");
    assert_eq!(lines.len(), 1 + 25);
    // (0,0,0,1) is a parity zero
    assert!(lines[2].starts_with("0,0,0,1,0,"), "{}", lines[2]);
    // (0,0,0,0) row carries the Gaussian integral
    assert!(lines[1].contains("1.2533141373155003"));
    assert!(lines[1].ends_with(",exact"));
}

#[test]
fn norms_report() {
    let out = hermprod(&["norms", "--p", "0", "--q", "0", "--size", "60"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_valid(&schema_for("norms-record.schema.json"), text.trim());
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    let ratio = v["results"]["ratio"].as_f64().unwrap();
    assert!(ratio >= 1.0 - 1e-9, "ratio {ratio}");
}

#[test]
fn quad_golden() {
    let out = hermprod(&["quad", "1", "1", "1", "1", "--nodes", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("0.939985602986625"), "{text}");
    assert_valid(&schema_for("value-record.schema.json"), text.trim());
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["results"]["provenance"], "quadrature");
}

#[test]
fn stdout_deterministic_across_runs() {
    for args in [
        vec!["w4", "6", "2", "4", "2"],
        vec!["verify", "--max-sum", "6"],
        vec!["table", "--jmax", "3", "--p", "1", "--q", "1"],
        vec!["norms", "--p", "1", "--q", "0", "--size", "31"],
        vec!["bounds", "--p", "1", "--q", "1", "--jkmax", "20"],
    ] {
        let a = hermprod(&args);
        let b = hermprod(&args);
        assert_eq!(a.stdout, b.stdout, "nondeterministic stdout for {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn timing_goes_to_stderr_not_stdout() {
    let out = hermprod(&["w4", "0", "0", "0", "0"]);
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("timing_ms"));
    assert!(!stdout_str(&out).contains("timing_ms"));
}
