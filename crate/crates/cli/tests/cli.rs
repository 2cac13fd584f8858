use std::io::Write;
use std::process::{Command, Output};

use orbitforge::OrbitTable;

#[path = "../../core/tests/common/reference_table.rs"]
mod reference_table;
use reference_table::REFERENCE_TABLE;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitforge"))
        .args(args)
        .env_remove("ORBITFORGE_PIECE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn table_csv_reproduces_reference_table() {
    let out = run(&["table", "--n-max", "5", "--m-max", "31", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,phi1,phi2,phi3,phi4,phi5,psi"));
    let rows: Vec<Vec<u64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 31);
    for (got, want) in rows.iter().zip(REFERENCE_TABLE.iter()) {
        if want[0] == 18 {
            // The printed Ψ(18)/18 = 14560 is a misprint for 14532.
            assert_eq!(got[..6], want[..6]);
            assert_eq!((want[6], got[6]), (14560, 14532));
        } else {
            assert_eq!(got[..], want[..], "row m = {}", want[0]);
        }
    }
}

#[test]
fn single_row_table() {
    let out = run(&["table", "--n-max", "1", "--m-max", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "m,phi1,psi\n1,1,2\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["table", "--m-max", "0"][..],
        &["table", "--format", "xml"],
        &["bound", "--s", "3"],
        &["bound", "--s", "0", "--t", "3"],
        &["lambda", "--tol", "-1"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_orbitforge"))
        .args(["oracle", "--k-max", "2"])
        .env("ORBITFORGE_PIECE_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_queries() {
    for (s, t, want) in [("3", "7", "4 (sharp)"), ("6", "10", "2 (sharp)"), ("12", "20", "2 (sharp)")] {
        let out = run(&["bound", "--s", s, "--t", t]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out).trim(), want);
    }
    let out = run(&["bound", "--s", "12", "--t", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bound"], 1);
    assert_eq!(v["status"], "formula-inapplicable");
    assert_eq!(run(&["bound", "--s", "8", "--t", "4"]).status.code(), Some(1));
    assert_eq!(run(&["bound", "--s", "5", "--t", "3"]).status.code(), Some(1));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "--suite", "properties", "--n", "2", "--k-max", "40"][..],
        &["verify", "--suite", "oracle", "--map", "fn", "--n", "2", "--k-max", "10"],
        &["verify", "--suite", "oracle", "--map", "thm1", "--k-max", "12"],
        &["verify", "--suite", "symbolic", "--map", "fn", "--n", "3", "--k-max", "10"],
        &["verify", "--suite", "mobius", "--m-max", "200"],
        &["verify", "--suite", "thm1c", "--m-max", "64"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}\n{}", stdout(&out));
        assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
    }
    let out = run(&["verify", "--suite", "mobius", "--m-max", "30", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = v.as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert_eq!(c["pass"], true);
        assert!(c["property"].is_string() && c["range"].is_string());
        assert!(c.get("counterexample").is_none());
    }
}

#[test]
fn verify_reports_failure_with_exit_1() {
    // A cap of 3 pieces cannot hold the second iterate of f_2.
    let out = Command::new(env!("CARGO_BIN_EXE_orbitforge"))
        .args(["verify", "--suite", "oracle", "--map", "fn", "--n", "2", "--k-max", "4"])
        .env("ORBITFORGE_PIECE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("piece cap"));
}

#[test]
fn csv_round_trip_is_byte_identical() {
    let out = run(&["table", "--n-max", "4", "--m-max", "63", "--format", "csv"]);
    let text = stdout(&out);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    let back = std::fs::read_to_string(file.path()).unwrap();
    assert_eq!(OrbitTable::from_csv(&back).unwrap().to_csv(), text);
}

#[test]
fn table_json_shape() {
    let out = run(&["table", "--n-max", "2", "--m-max", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["m_max"], 3);
    assert_eq!(v["n_max"], 2);
    assert_eq!(v["rows"][2], serde_json::json!({"m": 3, "phi": [1, 0], "psi": 2}));
}

#[test]
fn lambda_prints_decimal_and_bracket() {
    let out = run(&["lambda", "--n", "1", "--tol", "1e-10"]);
    let text = stdout(&out);
    assert!(text.starts_with("lambda_1 = 1.6180339888\n"), "{text}");
    let out = run(&["lambda", "--n", "2", "--tol", "1e-6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lambda"], "1.512876");
    assert_eq!(v["n"], 2);
    assert_eq!(v["bracket"].as_array().unwrap().len(), 2);
}

#[test]
fn order_queries() {
    assert_eq!(stdout(&run(&["order", "--s", "9", "--t", "6"])).trim(), "9 ≺ 6");
    assert_eq!(stdout(&run(&["order", "--s", "2", "--t", "4"])).trim(), "4 ≺ 2");
    let listed = stdout(&run(&["order", "--m-max", "12"]));
    assert_eq!(listed.trim(), "3 ≺ 5 ≺ 7 ≺ 9 ≺ 11 ≺ 6 ≺ 10 ≺ 12 ≺ 8 ≺ 4 ≺ 2 ≺ 1");
}

#[test]
fn oracle_from_map_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"nodes":[[1,1,3,1],[2,1,1,1],[3,1,2,1]]}}"#).unwrap();
    let path = file.path().to_str().unwrap();
    let out = run(&["oracle", "--map-file", path, "--k-max", "6", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let points: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().to_string())
        .collect();
    assert_eq!(points, ["1", "3", "4", "7", "11", "18"]);
}

#[test]
fn counts_and_lucas() {
    assert_eq!(stdout(&run(&["lucas", "--k-max", "4", "--format", "csv"])), "k,lucas\n1,1\n2,3\n3,4\n4,7\n");
    let out = run(&["count", "--n", "2", "--m-max", "5", "--format", "csv"]);
    assert_eq!(stdout(&out), "m,phi2\n1,1\n2,1\n3,0\n4,1\n5,1\n");
    let out = run(&["count", "--psi", "--m-max", "18", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["values"][17], 14532);
}

#[test]
fn scan_reports_and_passes() {
    let out = run(&["scan", "--n-max", "5", "--m-max", "63", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["equalities"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(v["findings"].as_array().unwrap().len(), 10);
}
