mod common;

use comsat::oracle::{brute_oracle, OracleVerdict, MAX_HORIZON, MAX_NODES};
use comsat::{solve, SolveStatus, SolverConfig};
use serde_json::{json, Value};

fn two_nodes(len: i64, horizon: i64, range: i64, jobs: Value) -> comsat::Instance {
    common::instance(json!({
        "nodes": [1, 2], "depot": 1, "edges": common::line_edges(&[len]),
        "horizon": horizon, "vehicles": ["R1", "R2"], "operating_range": range,
        "charge_coeff": 1, "discharge_coeff": 1, "jobs": jobs
    }))
}

/// Oracle verdict, checked against the solver where the solver is decisive.
fn verdict(inst: &comsat::Instance) -> OracleVerdict {
    let v = brute_oracle(inst).unwrap();
    let res = solve(inst, &SolverConfig::default()).unwrap();
    match res.status {
        SolveStatus::Sat => assert_eq!(v, OracleVerdict::Feasible),
        SolveStatus::Unsat => assert_eq!(v, OracleVerdict::Infeasible),
        SolveStatus::Unknown => {}
    }
    v
}

#[test]
fn single_delivery() {
    let job = json!({"J1": common::pickup_delivery(&["R1"], 1, 2, (0, None))});
    assert_eq!(verdict(&two_nodes(1, 2, 10, job.clone())), OracleVerdict::Feasible);
    assert_eq!(verdict(&two_nodes(1, 1, 10, job.clone())), OracleVerdict::Infeasible);
    // not enough range for the round trip
    assert_eq!(verdict(&two_nodes(2, 10, 3, job)), OracleVerdict::Infeasible);
}

#[test]
fn deadline_at_exact_arrival() {
    let on_time = json!({"J1": common::pickup_delivery(&["R1"], 1, 2, (0, Some(3)))});
    assert_eq!(verdict(&two_nodes(3, 6, 10, on_time)), OracleVerdict::Feasible);
    let early = json!({"J1": common::pickup_delivery(&["R1"], 1, 2, (0, Some(2)))});
    assert_eq!(verdict(&two_nodes(3, 6, 10, early)), OracleVerdict::Infeasible);
}

#[test]
fn one_node_cannot_host_two_vehicles() {
    let same_instant = json!({
        "J1": common::pickup_delivery(&["R1"], 1, 2, (1, Some(1))),
        "J2": common::pickup_delivery(&["R2"], 1, 2, (1, Some(1))),
    });
    assert_eq!(verdict(&two_nodes(1, 6, 10, same_instant)), OracleVerdict::Infeasible);
    let staggered = json!({
        "J1": common::pickup_delivery(&["R1"], 1, 2, (1, Some(1))),
        "J2": common::pickup_delivery(&["R2"], 1, 2, (1, Some(3))),
    });
    assert_eq!(verdict(&two_nodes(1, 6, 10, staggered)), OracleVerdict::Feasible);
}

#[test]
fn one_vehicle_serves_both_jobs_in_turn() {
    let jobs = json!({
        "J1": common::pickup_delivery(&["R1"], 1, 2, (0, Some(2))),
        "J2": common::pickup_delivery(&["R1"], 1, 2, (5, Some(8))),
    });
    assert_eq!(verdict(&two_nodes(2, 12, 10, jobs)), OracleVerdict::Feasible);
}

#[test]
fn distant_windows_are_infeasible() {
    // the two deliveries lie 4 apart but their windows are 1 apart
    let inst = common::instance(json!({
        "nodes": [1, 2, 3], "depot": 2, "edges": common::line_edges(&[2, 2]),
        "horizon": 10, "vehicles": ["R1"], "operating_range": 20,
        "charge_coeff": 0, "discharge_coeff": 1,
        "jobs": {
            "J1": common::pickup_delivery(&["R1"], 2, 1, (2, Some(3))),
            "J2": common::pickup_delivery(&["R1"], 2, 3, (3, Some(4))),
        }
    }));
    assert_eq!(verdict(&inst), OracleVerdict::Infeasible);
}

#[test]
fn unreachable_deadline_is_unsat_for_both() {
    let job = json!({"J1": common::pickup_delivery(&["R1"], 1, 2, (0, Some(3)))});
    let inst = two_nodes(4, 12, 20, job);
    assert_eq!(verdict(&inst), OracleVerdict::Infeasible);
    let res = solve(&inst, &SolverConfig::default()).unwrap();
    assert_eq!(res.status, SolveStatus::Unsat);
}

#[test]
fn caps_are_enforced() {
    let job = json!({"J1": common::pickup_delivery(&["R1"], 1, 2, (0, None))});
    assert!(brute_oracle(&two_nodes(1, MAX_HORIZON + 1, 10, job.clone())).is_err());
    let n = MAX_NODES + 1;
    let big = common::instance(json!({
        "nodes": (1..=n).collect::<Vec<_>>(), "depot": 1,
        "edges": common::line_edges(&vec![1; n - 1]),
        "horizon": 10, "vehicles": ["R1"], "operating_range": 30,
        "charge_coeff": 1, "discharge_coeff": 1, "jobs": job
    }));
    assert!(brute_oracle(&big).is_err());
}
