//! Command-line behaviour: outputs, exit codes and round-trips.

use std::process::Command;

use diagramcat::cli::run_with;
use diagramcat::Partition;
use serde_json::Value;

const ALPHA: &str = "6 8 | 1,4 | 2,3,-4,-5 | 5,6 | -1,-2,-6 | -3 | -7,-8";
const BETA: &str = "8 7 | 1,2 | 3,4,-1 | 5,-4,-5 | 6 | 7 | 8,-6,-7 | -2 | -3";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("diagramcat").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn compose_prints_the_product_line() {
    let (code, out, _) = run(&["compose", ALPHA, BETA]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "6 7 | 1,4 | 2,3,-1,-4,-5 | 5,6 | -2 | -3 | -6,-7");
    let back: Partition = out.trim().parse().unwrap();
    assert_eq!(back.to_string(), out.trim());

    let (code, out, _) = run(&["compose", "--json", ALPHA, BETA]);
    assert_eq!(code, 0);
    let back: Partition = serde_json::from_str(&out).unwrap();
    assert_eq!(back.to_string(), "6 7 | 1,4 | 2,3,-1,-4,-5 | 5,6 | -2 | -3 | -6,-7");
}

#[test]
fn parse_errors_are_usage_errors_with_a_column() {
    let (code, _, err) = run(&["compose", "2 2 | 1,x", "2 2 | 1,-1 | 2,-2"]);
    assert_eq!(code, 2);
    assert!(err.contains("column 9"), "{err}");

    let (code, _, err) = run(&["analyze", "{\"tag\": \"B\",\n \"m\": 2, \"n\": }"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2 column"), "{err}");

    let (code, _, err) = run(&["analyze", r#"{"tag":"B","m":2,"n":2,"sigma":"2 2 | 1,-1 | 2,-3"}"#]);
    assert_eq!(code, 2);
    assert!(err.contains("sigma"), "{err}");

    assert_eq!(run(&["enumerate", "Q", "1", "1"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["enumerate", "P", "6", "6"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn enumerate_streams_reparsable_lines() {
    let (code, out, _) = run(&["enumerate", "TL", "4", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 14);
    for line in lines {
        let p: Partition = line.parse().unwrap();
        assert_eq!(p.to_string(), line);
    }
    assert_eq!(run(&["enumerate", "P", "2", "2", "--count"]).1.trim(), "15");
    assert_eq!(run(&["enumerate", "M", "3", "3", "--count"]).1.trim(), "51");
}

#[test]
fn analyze_reports_schema_one() {
    let spec = r#"{"tag":"P","m":1,"n":2,"sigma":"2 1 | 1,-1 | 2","options":{"oracle":true}}"#;
    let (code, out, err) = run(&["analyze", spec]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["homsetSize"], 5);
    assert_eq!(v["oracle"]["greenAgrees"], true);
    assert_eq!(v["oracle"]["regularAgrees"], true);
    assert_eq!(v["idempotentGenerated"]["consistent"], true);
    let sigma: Partition = v["sigma"].as_str().unwrap().parse().unwrap();
    assert_eq!(sigma.to_string(), "2 1 | 1,-1 | 2");
}

#[test]
fn analyze_brauer_canonical_rank_two() {
    let (code, out, _) = run(&["analyze", r#"{"tag":"B","m":4,"n":4,"canonicalRank":2}"#]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["regSize"], v["brauer"]["regSize"]);
    assert_eq!(v["idempotentCount"], v["brauer"]["idempotentCount"]);
    assert_eq!(v["brauer"]["regRank"], 6);
    assert_eq!(v["miDomination"]["dominated"], true);
}

#[test]
fn eggbox_dot_follows_the_naming_scheme() {
    let (code, out, _) = run(&["eggbox", r#"{"tag":"TL","m":3,"n":3}"#]);
    assert_eq!(code, 0);
    assert!(out.contains("label=\"D3\""));
    assert!(out.contains("label=\"D1\""));
    assert!(out.contains("PORT=\"H_0_0\""));
    assert!(out.contains("BGCOLOR=\"#cccccc\""));

    let (_, all, _) = run(&["eggbox", r#"{"tag":"P","m":1,"n":2,"sigma":"2 1 | 1,2 | -1"}"#]);
    let (_, reg, _) = run(&["eggbox", "--regular-only", r#"{"tag":"P","m":1,"n":2,"sigma":"2 1 | 1,2 | -1"}"#]);
    assert!(reg.matches("subgraph").count() < all.matches("subgraph").count());
}

#[test]
fn eggbox_writes_one_file_per_variant() {
    let dir = std::env::temp_dir().join(format!("diagramcat-eggbox-{}", std::process::id()));
    let (code, out, _) = run(&["eggbox", "--out-dir", dir.to_str().unwrap(), r#"{"tag":"TL","m":4,"n":4,"sigmaRank":2}"#]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 9);
    let files = std::fs::read_dir(&dir).unwrap().count();
    assert_eq!(files, 9);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_iso_on_the_rank_two_temperley_lieb_variants() {
    let (code, out, _) = run(&["classify-iso", r#"{"tag":"TL","m":4,"n":4,"sigmaRank":2}"#]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["contexts"].as_array().unwrap().len(), 9);
    assert_eq!(v["isoClasses"].as_array().unwrap().len(), 5);
    assert_eq!(v["isoAntiClasses"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_exit_code_tracks_mismatches() {
    let (code, out, err) = run(&["verify", "--tag", "PB", "--max-size", "5", "--report", "csv"]);
    assert_eq!(code, 0, "{err}");
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[6], "match");
    assert!(rdr.records().all(|r| &r.unwrap()[6] == "true"));

    let (code, out, _) = run(&["verify", "--tag", "B", "--max-size", "4", "--report", "json"]);
    assert_eq!(code, 0);
    let rows: Vec<Value> = serde_json::from_str(&out).unwrap();
    assert!(rows.iter().any(|r| r["quantity"] == "regSize"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_diagramcat");
    let ok = Command::new(bin).args(["compose", ALPHA, BETA]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), "6 7 | 1,4 | 2,3,-1,-4,-5 | 5,6 | -2 | -3 | -6,-7");
    let bad = Command::new(bin).args(["compose", ALPHA, ALPHA]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
