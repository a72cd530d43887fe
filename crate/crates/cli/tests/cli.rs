use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mhk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhk"))
        .args(args)
        .env_remove("MHK_SEED")
        .output()
        .expect("mhk runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).expect("one JSON record")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

#[test]
fn build_metacyclic() {
    let o = mhk(&["build", "MC[p=3,r=1,s=1,t=0,u=1]"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("order=243"), "{out}");
    assert!(out.contains("|G'|=9"), "{out}");
}

#[test]
fn build_q8_without_prime() {
    let o = mhk(&["build", "Q8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order=8"));
}

#[test]
fn build_rejects_side_condition() {
    let o = mhk(&["build", "C4[p=2,m1=1,m2=1,m3=1]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p > 2"), "{}", stderr(&o));
}

#[test]
fn build_rejects_garbage() {
    for spec in ["Nope[p=3]", "MC[p=3,r=1", "MC[p=4,r=1,s=1,t=0,u=1]"] {
        let o = mhk(&["build", spec]);
        assert_eq!(o.status.code(), Some(2), "{spec}");
    }
}

#[test]
fn build_prints_presentation() {
    let o = mhk(&["build", "B4", "--presentation"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("prime 3"));
    assert!(out.contains("gen a1 order 3"));
}

#[test]
fn build_from_file() {
    let path = fixture("fixtures/m3_21.pc");
    let o = mhk(&["build", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("order=27"));
    assert!(stdout(&o).contains("|G'|=3"));
}

#[test]
fn build_inconsistent_file_is_internal_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.pc");
    std::fs::write(&path, "prime 2\ngen x order 2\ngen y order 2\npow x = y\npow y = x\n").unwrap();
    let o = mhk(&["build", "--file", path.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(2) | Some(3)), "{:?}", o.status);
}

#[test]
fn check_dihedral_16() {
    let o = mhk(&["check", "E2[p=2,m=1]", "--pairs", "--a-index"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["metahamiltonian"], true);
    assert_eq!(v["a_index"], 2);
    assert_eq!(v["order"], 16);
}

#[test]
fn check_control_fails() {
    let o = mhk(&["check", "ut4", "--pairs"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["metahamiltonian"], false);
    let o = mhk(&["check", "UT[3,3]", "--pairs", "--definitional"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["metahamiltonian_def"], true);
}

#[test]
fn check_class_three() {
    let o = mhk(&["check", "B1[p=5,m=1]", "--class"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["class"], 3);
}

#[test]
fn check_iso_embeds_fingerprint() {
    let o = mhk(&["check", "Q8", "--iso"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["fingerprint_data"]["order_histogram"]["4"], 6);
}

#[test]
fn check_definitional_budget_marker() {
    let o = mhk(&["check", "B2[p=3,m=1]", "--definitional", "--budget-subgroups", "27"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["budget_exceeded"][0], "definitional");
}

#[test]
fn verify_empty_primes() {
    let o = mhk(&["verify-catalog", "--primes", "", "--pairs"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 1);
    let s: Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(s["total"], 0);
}

#[test]
fn verify_rejects_bad_bounds() {
    for args in [
        vec!["verify-catalog", "--max-order", "2:100"],
        vec!["verify-catalog", "--max-order", "x"],
        vec!["verify-catalog", "--primes", "7"],
        vec!["verify-catalog", "--primes", "4", "--max-order", "4:16"],
        vec!["verify-catalog", "--budget-iso", "0"],
    ] {
        assert_eq!(mhk(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_matches_golden_and_is_job_independent() {
    let golden = std::fs::read_to_string(fixture("golden/small_catalog.ndjson")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for jobs in ["1", "4"] {
        let out = dir.path().join(format!("r{jobs}.ndjson"));
        let o = mhk(&[
            "verify-catalog",
            "--max-order",
            "2:32",
            "--max-order",
            "3:3^4",
            "--pairs",
            "--definitional",
            "--a-index",
            "--iso",
            "--jobs",
            jobs,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let got = std::fs::read_to_string(&out).unwrap();
        assert_eq!(got, golden, "jobs={jobs}");
    }
}

#[test]
fn report_schema() {
    let golden = std::fs::read_to_string(fixture("golden/small_catalog.ndjson")).unwrap();
    let report = mhk_core::VerificationReport::parse_ndjson(&golden).unwrap();
    assert_eq!(report.summary.total, report.records.len());
    for r in &report.records {
        assert!(!r.family.is_empty());
        assert!(r.order > 0);
        assert_eq!(r.metahamiltonian, Some(true), "{}", r.spec);
    }
    assert_eq!(report.to_ndjson(), golden);
}

#[test]
fn timing_is_opt_in() {
    let o = mhk(&["check", "Q8", "--pairs"]);
    assert!(json(&o).get("elapsed_ms").is_none());
    let o = mhk(&["check", "Q8", "--pairs", "--timing"]);
    assert!(json(&o)["elapsed_ms"].is_number());
}
