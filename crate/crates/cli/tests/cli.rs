use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    report: Value,
    stderr: String,
}

fn copo(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_copo"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        report: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn c5_matrix_json(pad: usize) -> String {
    let n = 5 + pad;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i >= 5 || j >= 5 {
                        0
                    } else {
                        let d = (i as i64 - j as i64).rem_euclid(5);
                        if d <= 1 || d == 4 {
                            1
                        } else {
                            -1
                        }
                    }
                })
                .collect()
        })
        .collect();
    serde_json::json!({ "n": n, "data": rows }).to_string()
}

const C5_DIMACS: &str = "c 5-cycle\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";

#[test]
fn membership_identity_and_certify_round_trip() {
    let dir = TempDir::new().unwrap();
    let rows: Vec<Vec<i64>> = (0..5)
        .map(|i| (0..5).map(|j| (i == j) as i64).collect())
        .collect();
    let m = put(
        &dir,
        "i5.json",
        &serde_json::json!({ "n": 5, "data": rows }).to_string(),
    );
    let cert = dir.path().join("cert.json");
    let r = copo(&[
        "membership",
        s(&m),
        "--cone",
        "K",
        "--level",
        "0",
        "--certificate",
        s(&cert),
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["verdict"], "MEMBER");
    assert!(r.stderr.contains("MEMBER"));
    let c = copo(&["certify", s(&m), s(&cert)]);
    assert_eq!(c.code, 0, "{}", c.stderr);
    assert_eq!(c.report["report"]["passed"], true);
    assert!(c.report["report"]["residual"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn certify_rejects_a_mismatched_matrix() {
    let dir = TempDir::new().unwrap();
    let m = put(&dir, "m.json", r#"{"n": 2, "data": [[1, 0], [0, 1]]}"#);
    let other = put(&dir, "o.json", r#"{"n": 2, "data": [[2, 0], [0, 1]]}"#);
    let cert = dir.path().join("cert.json");
    assert_eq!(
        copo(&["membership", s(&m), "--certificate", s(&cert)]).code,
        0
    );
    assert_eq!(copo(&["certify", s(&other), s(&cert)]).code, 1);
}

#[test]
fn membership_c5_not_member() {
    let dir = TempDir::new().unwrap();
    let m = put(&dir, "c5.json", &c5_matrix_json(0));
    let r = copo(&["membership", s(&m), "--cone", "K", "--level", "0"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["verdict"], "NOT_MEMBER");
    let padded = put(&dir, "c5p.json", &c5_matrix_json(1));
    let r = copo(&["membership", s(&padded), "--cone", "K", "--level", "1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["verdict"], "NOT_MEMBER");
}

#[test]
fn membership_c5_unpadded_enters_level_one() {
    // a relabelled Horn matrix
    let dir = TempDir::new().unwrap();
    let m = put(&dir, "c5.json", &c5_matrix_json(0));
    let cert = dir.path().join("cert.json");
    let r = copo(&[
        "membership",
        s(&m),
        "--level",
        "1",
        "--certificate",
        s(&cert),
    ]);
    assert_eq!(r.report["verdict"], "MEMBER", "{}", r.stderr);
    assert_eq!(copo(&["certify", s(&m), s(&cert)]).code, 0);
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let m = put(&dir, "bad.json", r#"{"n": 2, "data": [[1, 2], [3, 4]]}"#);
    let r = copo(&["membership", s(&m)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not symmetric"));
    let garbage = put(&dir, "g.json", "{ not json");
    assert_eq!(copo(&["relax", s(&garbage)]).code, 2);
    assert_eq!(copo(&["relax", "/definitely/missing.json"]).code, 2);
    assert_eq!(copo(&["membership", s(&m), "--cone", "X"]).code, 2);
    assert_eq!(copo(&["pathology", "--example", "4"]).code, 2);
}

#[test]
fn relax_sqp_identity() {
    let dir = TempDir::new().unwrap();
    let p = put(
        &dir,
        "sqp.json",
        r#"{"m": 1, "b": ["1"], "constraints": [{"n": 2, "C": [["-1", "0"], ["0", "-1"]], "A": [[[1, 1], [1, 1]]]}]}"#,
    );
    let certs = dir.path().join("certs.json");
    let r = copo(&[
        "relax",
        s(&p),
        "--cone",
        "K",
        "--level",
        "0",
        "--box",
        "2",
        "--certificates",
        s(&certs),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["status"], "OPTIMAL");
    assert!((r.report["value"].as_f64().unwrap() + 0.5).abs() < 1e-5);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(certs).unwrap()).unwrap();
    assert_eq!(saved.as_array().unwrap().len(), 1);
}

#[test]
fn relax_padded_c5_is_infeasible() {
    let dir = TempDir::new().unwrap();
    let prog = dir.path().join("ex2.json");
    assert_eq!(
        copo(&["pathology", "--example", "2", "--program", s(&prog)]).code,
        0
    );
    let r = copo(&["relax", s(&prog), "--level", "0", "--box", "10"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["status"], "PRIMAL_INFEASIBLE");
}

#[test]
fn alpha_on_c5() {
    let dir = TempDir::new().unwrap();
    let g = put(&dir, "c5.col", C5_DIMACS);
    let r = copo(&["alpha", s(&g), "--level", "0", "--cone", "K"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!((r.report["value"].as_f64().unwrap() - 5f64.sqrt()).abs() < 1e-3);
    assert_eq!(r.report["brute_alpha"], "2");
}

#[test]
fn alpha_weighted_with_custom_matrix() {
    let dir = TempDir::new().unwrap();
    let g = put(&dir, "k2.json", r#"{"n": 2, "edges": [[0, 1]]}"#);
    let w = put(&dir, "w.txt", "1 2");
    let b = put(
        &dir,
        "b.json",
        r#"{"n": 2, "data": [["1", "1"], ["1", "1/2"]]}"#,
    );
    let r = copo(&[
        "alpha",
        s(&g),
        "--weights",
        s(&w),
        "--b-matrix",
        s(&b),
        "--cone",
        "Q",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["brute_alpha"], "2");
    assert!(r.report["value"].as_f64().unwrap() >= 2.0 - 1e-6);
    let bad = put(
        &dir,
        "bad.json",
        r#"{"n": 2, "data": [["1", "0"], ["0", "1/2"]]}"#,
    );
    assert_eq!(
        copo(&["alpha", s(&g), "--weights", s(&w), "--b-matrix", s(&bad)]).code,
        2
    );
}

#[test]
fn chroma_on_k3() {
    let dir = TempDir::new().unwrap();
    let g = put(
        &dir,
        "k3.json",
        r#"{"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}"#,
    );
    let r = copo(&["chroma", s(&g), "--level", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.report["value"].as_f64().unwrap() <= 3.0 + 1e-6);
    assert_eq!(r.report["brute_chi"], 3);
    assert_eq!(r.report["formulation"], "Q");
}

#[test]
fn sqp_and_reciprocal() {
    let dir = TempDir::new().unwrap();
    let m = put(
        &dir,
        "i3.json",
        r#"{"n": 3, "data": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}"#,
    );
    let p = copo(&["sqp", s(&m)]);
    let q = copo(&["sqp", s(&m), "--reciprocal"]);
    assert_eq!((p.code, q.code), (0, 0));
    let (pv, qv) = (
        p.report["value"].as_f64().unwrap(),
        q.report["value"].as_f64().unwrap(),
    );
    assert!((pv - 1.0 / 3.0).abs() < 1e-5);
    assert!((pv * qv - 1.0).abs() < 1e-4);
}

#[test]
fn pathology_reports() {
    let r = copo(&["pathology", "--example", "1", "--n", "3"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["checks"]["pattern_check"]["result"], "ACCEPT");
    assert_eq!(r.report["program"]["m"], 3);
    let r = copo(&["pathology", "--example", "3", "--n", "2"]);
    assert_eq!(r.report["program"]["constraints"][0]["n"], 10);
    assert_eq!(r.report["checks"]["level0_z2_check"]["result"], "REJECT");
    let r = copo(&["pathology", "--example", "2", "--seed", "7"]);
    assert_eq!(r.report["checks"]["m1_screen"]["violation"], false);
}

#[test]
fn output_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let r = copo(&["pathology", "--example", "2", "--output", s(&out)]);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(saved, r.report);
    // deterministic given the seed
    assert_eq!(copo(&["pathology", "--example", "2"]).report, r.report);
}
