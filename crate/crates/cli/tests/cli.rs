use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn comsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_comsat")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SHORT_DEADLINE: &str = r#"{
  "nodes": [1, 2], "depot": 1, "edges": [{"u": 1, "v": 2, "len": 4, "cap": 1}],
  "horizon": 20, "vehicles": ["R1"], "operating_range": 50,
  "charge_coeff": 1, "discharge_coeff": 1,
  "jobs": {"J1": {"eligible": ["R1"], "tasks": {
    "1": {"location": 1, "window": [0, null]},
    "2": {"location": 2, "window": [0, 3], "precedes": ["1"]}}}}
}"#;

#[test]
fn generate_solve_validate() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let sched = dir.path().join("sched.json");
    let asg = dir.path().join("asg.json");
    let stats = dir.path().join("stats.json");
    let gen = comsat(&["gen", "--nodes", "4", "--vehicles", "2", "--jobs", "1", "--horizon", "20", "--seed", "3", "-o", s(&inst)]);
    assert!(gen.status.success(), "{}", String::from_utf8_lossy(&gen.stderr));
    let again = dir.path().join("again.json");
    comsat(&["gen", "--nodes", "4", "--vehicles", "2", "--jobs", "1", "--horizon", "20", "--seed", "3", "-o", s(&again)]);
    assert_eq!(fs::read_to_string(&inst).unwrap(), fs::read_to_string(&again).unwrap());

    let out = comsat(&[
        "solve", "--instance", s(&inst), "--output", s(&sched), "--assignment", s(&asg),
        "--stats", s(&stats), "--timeout", "20",
    ]);
    let status = String::from_utf8_lossy(&out.stdout).trim().to_string();
    let stats: serde_json::Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert!(stats["pathfinder_calls"].as_u64().unwrap() >= 1);
    match out.status.code() {
        Some(0) => {
            assert_eq!(status, "sat");
            let v = comsat(&["validate", "--instance", s(&inst), "--schedule", s(&sched), "--assignment", s(&asg)]);
            assert_eq!(v.status.code(), Some(0));
            let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
            assert_eq!(report["ok"], true);
        }
        Some(1) => assert_eq!(status, "unsat"),
        Some(2) => assert_eq!(status, "unknown"),
        other => panic!("exit {other:?}: {}", String::from_utf8_lossy(&out.stderr)),
    }
}

#[test]
fn unsat_exit_code_and_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let sched = dir.path().join("sched.json");
    fs::write(&inst, SHORT_DEADLINE).unwrap();
    let out = comsat(&["solve", "--instance", s(&inst), "--output", s(&sched)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "unsat");
    assert!(!sched.exists());
}

#[test]
fn tampered_schedule_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let sched = dir.path().join("sched.json");
    let asg = dir.path().join("asg.json");
    fs::write(&inst, SHORT_DEADLINE.replace("[0, 3]", "[0, 6]")).unwrap();
    let out = comsat(&["solve", "--instance", s(&inst), "--output", s(&sched), "--assignment", s(&asg)]);
    assert_eq!(out.status.code(), Some(0));
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sched).unwrap()).unwrap();
    let t = doc["traces"][0]["nodes"][1]["t"].as_i64().unwrap();
    doc["traces"][0]["nodes"][1]["t"] = (t + 1).into();
    fs::write(&sched, doc.to_string()).unwrap();
    let v = comsat(&["validate", "--instance", s(&inst), "--schedule", s(&sched), "--assignment", s(&asg)]);
    assert_eq!(v.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["ok"], false);
}

#[test]
fn malformed_instance_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.json");
    fs::write(&inst, "{\"nodes\": [1,").unwrap();
    let out = comsat(&["solve", "--instance", s(&inst), "--output", s(&dir.path().join("x.json"))]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let missing = comsat(&["solve", "--instance", "/nonexistent/i.json", "--output", "/tmp/x.json"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn bench_writes_rows_and_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.json");
    let csv = dir.path().join("out.csv");
    let points: Vec<serde_json::Value> = (0..3)
        .map(|seed| serde_json::json!({"nodes": 4, "vehicles": 2, "jobs": 1, "edge_reduction": 0, "horizon": 12, "seed": seed}))
        .collect();
    fs::write(&grid, serde_json::to_string(&points).unwrap()).unwrap();
    let out = comsat(&["bench", "--grid", s(&grid), "--out", s(&csv), "--timeout", "10"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 + 1);
    assert!(text.lines().last().unwrap().starts_with("aggregate,4-2-1/T12/R0"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("4-2-1/T12/R0"));
}
