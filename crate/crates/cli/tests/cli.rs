use std::path::Path;
use std::process::Command;

use serde_json::Value;

const REFERENCE: &str = r#"{"n": 2, "p": 2.0, "gamma": 0.8,
    "cone": {"orthant_mask": [true, true]},
    "weights": [{"kind": "monomial", "exponents": [1.0, 1.0]}],
    "samples": 2000, "random_functions": 10}"#;

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn wgn(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wgn")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn constants_for_reference_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", REFERENCE);
    let (code, out, _) = wgn(&["constants", &cfg, "--no-timestamp"]);
    assert_eq!(code, 0);
    let r = json(&out);
    let b = &r["result"];
    assert!((b["l"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert!((b["m"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert!((b["theta"].as_f64().unwrap() - 0.6).abs() < 1e-12);
    assert!(b["provenance"]["theta"].is_string());
    assert_eq!(r["schema_version"], 1);
    assert!(r.get("timestamp").is_none());

    let (_, out, _) = wgn(&["constants", &cfg, "--gamma", "1"]);
    let r = json(&out);
    assert!(r["result"]["theta"].is_null());
    assert!(r["result"]["log_sobolev"].as_f64().unwrap() > 0.0);
    assert!(r["timestamp"].is_u64());
}

#[test]
fn flags_override_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", REFERENCE);
    let out_path = dir.path().join("report.json");
    let out_str = out_path.to_string_lossy().into_owned();
    let (code, stdout, _) = wgn(&["constants", &cfg, "--gamma", "2", "--seed", "5", "--out", &out_str, "--no-timestamp"]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let r = json(&std::fs::read_to_string(&out_path).unwrap());
    assert_eq!(r["config"]["gamma"], 2.0);
    assert_eq!(r["config"]["seed"], 5);
    assert!((r["result"]["theta"].as_f64().unwrap() - 0.6).abs() < 1e-12);
}

#[test]
fn sweep_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let body = REFERENCE.replace(
        r#""samples""#,
        r#""sweep": {"gammas": [0.7, 0.75, 0.8, 0.85, 0.9, 0.95], "lambdas": [0.5, 1.0, 2.0]}, "samples""#,
    );
    let cfg = write(dir.path(), "s.json", &body);
    let (code, out, err) = wgn(&["sweep", &cfg]);
    assert_eq!(code, 0, "{err}");
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "schema_version");
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 18);
    // γ = 0.7 is outside the admissible range for τ = 2 and is noted, not fatal
    assert!(rows[0][9].starts_with("skipped"));
    for row in &rows[3..] {
        let ratio: f64 = row[6].parse().unwrap();
        assert!((ratio - 1.0).abs() < 1e-8);
    }
}

#[test]
fn verify_suites_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("rows.csv");
    let body = REFERENCE.replace(
        r#""samples""#,
        &format!(r#""outputs": {{"csv": {:?}}}, "samples""#, csv_path.to_string_lossy()),
    );
    let cfg = write(dir.path(), "v.json", &body);
    for suite in ["gn", "log_sobolev", "faber_krahn", "isoperimetric"] {
        let (code, out, err) = wgn(&["verify", &cfg, "--suite", suite, "--no-timestamp"]);
        assert_eq!(code, 0, "{suite}: {err}");
        let r = json(&out);
        assert_eq!(r["result"]["failed"], 0);
        assert!(r["result"]["checks"].as_array().unwrap().len() >= 4);
    }
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.lines().count() > 10);
    let (code, _, err) = wgn(&["verify", &cfg, "--gamma", "1", "--suite", "gn"]);
    assert_eq!(code, 2);
    assert!(err.contains("γ ≠ 1"), "{err}");
}

#[test]
fn integrals_cross_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "i.json", REFERENCE);
    let (code, out, _) = wgn(&["integrals", &cfg, "--no-timestamp"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["result"]["checks"].as_array().unwrap().len(), 27);
    assert!(r["result"]["worst_relative_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn condition_with_unequal_and_absent_weights() {
    let dir = tempfile::tempdir().unwrap();
    let triplet = r#"{"n": 2, "p": 2.0, "gamma": 0.9,
        "cone": {"orthant_mask": [true, false]},
        "weights": [{"kind": "monomial", "exponents": [0.5, 0.0]},
                    {"kind": "monomial", "exponents": [1.0, 0.0]},
                    {"kind": "monomial", "exponents": [0.75, 0.0]}],
        "samples": 3000, "random_functions": 10}"#;
    let cfg = write(dir.path(), "t.json", triplet);
    let (code, out, err) = wgn(&["check-condition", &cfg, "--no-timestamp"]);
    assert_eq!(code, 0, "{err}");
    let k = json(&out)["result"]["k"].as_f64().unwrap();
    assert!((k + 1.591036).abs() < 1e-6);
    let (code, out, err) = wgn(&["verify", &cfg, "--suite", "gn", "--no-timestamp"]);
    assert_eq!(code, 0, "{err}");
    let r = json(&out);
    assert!(r["result"]["family_constant"]["constant"].as_f64().unwrap() > 0.0);

    // ω₃ drops out when K = −1/(1−γ)
    let pair = REFERENCE.replace(
        r#""weights": [{"kind": "monomial", "exponents": [1.0, 1.0]}]"#,
        r#""weights": [{"kind": "monomial", "exponents": [1.0, 1.0]}, {"kind": "monomial", "exponents": [1.0, 1.0]}],
           "condition": {"c0": 1.0, "k": -5.0}"#,
    );
    let cfg = write(dir.path(), "pair.json", &pair);
    let (code, out, err) = wgn(&["check-condition", &cfg, "--no-timestamp"]);
    assert!(code == 0 || code == 1, "{err}");
    assert_eq!(json(&out)["result"]["omega3_absent"], true);
}
