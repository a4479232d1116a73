use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kneser-sphere"))
}

#[test]
fn realize_writes_off() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ring2.off");
    let status = bin().args(["realize", "2", "-o"]).arg(&path).status().unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("OFF"));
    assert_eq!(lines.next(), Some("9 14 21"));
    assert_eq!(text.lines().filter(|l| l.starts_with("3 ")).count(), 14);
}

#[test]
fn export_graph_dot_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let ok = bin().args(["export", "2", "--what=graph", "--format=dot", "-o"]).arg(&dot).status().unwrap();
    assert!(ok.success());
    let text = fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches(" -- ").count(), 18);
    let off = dir.path().join("g.off");
    let bad = bin().args(["export", "2", "--what=graph", "--format=off", "-o"]).arg(&off).status().unwrap();
    assert!(!bad.success());
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let out = bin().args(["verify", "1", "2", "--stages=sphere-only", "--json"]).arg(&json).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let reports: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 2);
    assert!(!bin().args(["verify", "3", "2"]).status().unwrap().success());
}
