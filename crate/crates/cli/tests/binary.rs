use std::process::{Command, Output};

use entassist::report::{ReportDocument, CLAIM_IDS};

fn entassist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entassist"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(o: &Output) -> f64 {
    stdout(o).trim().parse().unwrap()
}

#[test]
fn measure_catalog_values() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["bell", "maxent_8x4"] {
        let path = dir.path().join(format!("{name}.json"));
        let o = entassist(&["export", "--state", name, "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let bell = entassist(&[
        "measure",
        "--state",
        dir.path().join("bell.json").to_str().unwrap(),
        "--cut",
        "A:B",
    ]);
    assert_eq!(bell.status.code(), Some(0));
    assert!((value(&bell) - 1.0).abs() < 1e-10);
    let maxent = entassist(&[
        "measure",
        "--state",
        dir.path().join("maxent_8x4.json").to_str().unwrap(),
    ]);
    assert!((value(&maxent) - 2.0).abs() < 1e-10);
    let phi = entassist(&["measure", "--state", "catalog:phi", "--cut", "AB:C"]);
    assert_eq!(phi.status.code(), Some(0));
    assert!(value(&phi).is_finite());
}

#[test]
fn exit_codes() {
    assert_eq!(entassist(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(entassist(&["scan", "--ncopy", "3"]).status.code(), Some(2));
    assert_eq!(entassist(&["scan", "--grid", "16"]).status.code(), Some(2));
    // mixed across the cut, missing file, unknown measure
    assert_eq!(
        entassist(&["measure", "--state", "catalog:mixed"]).status.code(),
        Some(1)
    );
    assert_eq!(
        entassist(&["measure", "--state", "/nonexistent.json"]).status.code(),
        Some(1)
    );
    assert_eq!(
        entassist(&["measure", "--state", "catalog:bell", "--measure", "negativity"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        entassist(&["measure", "--state", "catalog:bell"]).status.code(),
        Some(0)
    );
}

#[test]
fn simulate_and_eoa_commands() {
    let o = entassist(&["simulate", "--state", "catalog:phi", "--protocol", "phi"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("leaves   4"));
    assert!(text.lines().last().unwrap().starts_with("average  2.0000000000"));

    let o = entassist(&["eoa", "--state", "catalog:product", "--restarts", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().find(|l| l.starts_with("value")).unwrap().to_string();
    let v: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(v.abs() < 1e-9);
}

#[test]
fn reproduce_report_is_deterministic_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for (i, threads) in ["1", "1", "3"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let o = entassist(&[
            "reproduce",
            "--restarts",
            "4",
            "--seed",
            "7",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        let doc: ReportDocument = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(o.status.code(), Some(if doc.all_pass { 0 } else { 1 }));
        assert_eq!(doc.all_pass, doc.claims.iter().all(|c| c.pass));
        docs.push(doc.without_runtimes());
    }
    assert_eq!(docs[0], docs[1]);
    assert_eq!(docs[0], docs[2]);
    let ids: Vec<&str> = docs[0].claims.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, CLAIM_IDS);
    let a = serde_json::to_string(&docs[0]).unwrap();
    let b = serde_json::to_string(&docs[1]).unwrap();
    assert_eq!(a, b);
}
