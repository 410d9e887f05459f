use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn uscode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uscode")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rows(path: &Path) -> Vec<Value> {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn synth_analyze_diff_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    for (seed, date, out) in [("1", "2008-10-01", "a"), ("2", "2009-11-10", "b")] {
        let o = uscode(&["synth", "--seed", seed, "--date", date, "--out", s(&d.join(out))]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = d.join("a/synthetic.json");
    let b = d.join("b/synthetic.json");

    let o = uscode(&["analyze", s(&a), "--bootstrap", "20", "--out", s(&d.join("an"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "snapshot",
        "words",
        "degree_stats",
        "degree_ccdf",
        "powerlaw",
        "word_histogram",
        "entropy_histogram",
        "sections",
        "run",
    ] {
        assert!(d.join("an").join(format!("{f}.csv")).exists(), "{f}.csv");
        assert!(d.join("an").join(format!("{f}.json")).exists(), "{f}.json");
    }
    let snap = &rows(&d.join("an/snapshot.json"))[0];
    assert_eq!(snap["date"], "2008-10-01");
    assert_eq!(
        snap["total_edges"].as_u64().unwrap(),
        snap["total_nodes"].as_u64().unwrap() - 1 + snap["citation_edges"].as_u64().unwrap()
    );

    let o = uscode(&["diff", s(&b), s(&a), "--bootstrap", "0", "--out", s(&d.join("diff"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let growth = rows(&d.join("diff/growth.json"));
    assert_eq!(growth.len(), 1);
    assert_eq!(growth[0]["days"], 405);
    let delta = rows(&d.join("diff/word_histogram_delta.json"));
    let sum: f64 = delta.iter().map(|r| r["value"].as_f64().unwrap()).sum();
    assert!(sum.abs() < 1e-9);

    let o = uscode(&["layout", s(&a), "--out", s(&d.join("lay"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let pts = rows(&d.join("lay/layout.json"));
    assert_eq!(pts.len() as u64, snap["total_nodes"].as_u64().unwrap());
    assert_eq!(pts[0]["depth"], 0);
}

#[test]
fn ingest_writes_canonical_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert!(uscode(&["synth", "--seed", "3", "--out", s(&d.join("s"))])
        .status
        .success());
    let src = d.join("s/synthetic.json");
    assert!(uscode(&["ingest", s(&src), "--out", s(&d.join("i"))]).status.success());
    assert_eq!(
        std::fs::read(&src).unwrap(),
        std::fs::read(d.join("i/canonical.json")).unwrap()
    );
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let out = s(&d.join("o")).to_string();
    assert_eq!(uscode(&["--bogus"]).status.code(), Some(2));
    assert_eq!(
        uscode(&["analyze", s(&d.join("missing.json")), "--out", &out])
            .status
            .code(),
        Some(2)
    );

    assert!(uscode(&["synth", "--seed", "4", "--out", s(&d.join("s"))])
        .status
        .success());
    let src = d.join("s/synthetic.json");
    let code = |args: &[&str]| uscode(args).status.code();
    assert_eq!(code(&["--threads", "0", "analyze", s(&src), "--out", &out]), Some(2));
    assert_eq!(
        code(&["analyze", s(&src), "--bin-width-log10", "0", "--out", &out]),
        Some(2)
    );
    assert_eq!(
        code(&["diff", s(&src), s(&src), "--dates", "2009-01-01", "--out", &out]),
        Some(2)
    );

    // same snapshot twice: no elapsed time
    let o = uscode(&["diff", s(&src), s(&src), "--bootstrap", "0", "--out", &out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("metrics:"));

    std::fs::write(d.join("bad.json"), "{not json").unwrap();
    let o = uscode(&["analyze", s(&d.join("bad.json")), "--out", &out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ingest:"));
}
