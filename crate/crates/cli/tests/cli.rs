use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qrdecomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrdecomp"))
        .args(args)
        .env_remove("QRDECOMP_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn search_f7_finds_nothing() {
    let out = qrdecomp(&["search", "--q", "7", "--mode", "count-all"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"], "none-found");
    assert_eq!(doc["n_q"], 0);
}

#[test]
fn search_f9_counts_eighteen() {
    let out = qrdecomp(&["search", "--p", "3", "--n", "2", "--mode", "count-all"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["n_q"], 18);
    assert_eq!(doc["modulus"], serde_json::json!([1, 0, 1]));
    assert_eq!(doc["counts_by_size"][0]["k"], 2);
    assert_eq!(doc["counts_by_size"][0]["count"], 18);
}

#[test]
fn exceeding_count_limits_exits_2() {
    let out = qrdecomp(&[
        "search",
        "--q",
        "9",
        "--mode",
        "count-all",
        "--enumeration-limit",
        "0",
        "--count-limit",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let doc = stdout_json(&out);
    assert_eq!(doc["partial"], true);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(qrdecomp(&["search"]).status.code(), Some(1));
    assert_eq!(qrdecomp(&["search", "--q", "8"]).status.code(), Some(1));
    assert_eq!(qrdecomp(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        qrdecomp(&["search", "--q", "7", "--mode", "sideways"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(qrdecomp(&["--help"]).status.code(), Some(0));
}

#[test]
fn window_for_101() {
    let out = qrdecomp(&["window", "--p", "101"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let lower = doc["lower"].as_f64().unwrap();
    let upper = doc["upper"].as_f64().unwrap();
    let ln = 101f64.ln();
    assert!((lower - 101f64.sqrt() / (3.0 * ln)).abs() < 1e-12);
    assert!((upper - 101f64.sqrt() * ln).abs() < 1e-12);
    assert!((lower - 0.7255).abs() < 1e-3 && (upper - 46.38).abs() < 1e-2);
}

#[test]
fn count_matches_search() {
    let out = qrdecomp(&["count", "--q", "9", "--k", "2", "--m", "2", "--c", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["count"], 18);
    // C(3, 2)^2 = 9
    assert_eq!(doc["bound"]["scale"], "linear");
    assert_eq!(doc["bound"]["value"], 9);
    let out = qrdecomp(&["count", "--q", "9", "--k", "3", "--m", "2"]);
    assert_eq!(stdout_json(&out)["count"], 0);
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f9.json");
    let p = path.to_str().unwrap();
    let out = qrdecomp(&[
        "search",
        "--q",
        "9",
        "--mode",
        "enumerate-maximal",
        "--out",
        p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        qrdecomp(&["verify", "--certificate", p]).status.code(),
        Some(0)
    );

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["result"][0]["B"] = Value::String("2,6,7".into());
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = qrdecomp(&["verify", "--certificate", p]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["verified"], false);
}

#[test]
fn out_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fs.csv");
    let out = qrdecomp(&[
        "filter-stats",
        "--q",
        "101",
        "--samples",
        "5",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("q,epsilon,v_size,sample,size_u,ratio_sqrt_q\n"));
    assert_eq!(csv.lines().count(), 6);
    let manifest = dir.path().join("fs.csv.manifest.json");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(manifest).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "filter-stats");
    assert_eq!(m["seed"], 3);
    assert_eq!(m["field"]["q"], 101);
    assert!(m["timestamp_unix_ms"].as_u64().unwrap() > 0);
}

fn cached(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrdecomp"))
        .args(args)
        .env("QRDECOMP_CACHE_DIR", dir)
        .output()
        .unwrap()
}

#[test]
fn cache_dir_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = cached(dir.path(), &["field", "--q", "27"]);
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let second = cached(dir.path(), &["field", "--q", "27"]);
    let plain = qrdecomp(&["field", "--q", "27"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, plain.stdout);

    // a corrupt entry is ignored, not trusted
    let entry = entries[0].as_ref().unwrap().path();
    std::fs::write(
        &entry,
        "{\"p\":3,\"n\":3,\"modulus\":[0,0,0,1],\"generator\":1}",
    )
    .unwrap();
    let third = cached(dir.path(), &["field", "--q", "27"]);
    assert_eq!(third.status.code(), Some(0));
    assert_eq!(third.stdout, plain.stdout);
}

#[test]
fn charsum_csv_has_header_and_rows() {
    let out = qrdecomp(&[
        "charsum",
        "--q",
        "101",
        "--samples",
        "3",
        "--grid",
        "4x4,8x2",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,nu,size_u,size_v,lhs,rhs,ratio"));
    assert_eq!(lines.count(), 6);
}
