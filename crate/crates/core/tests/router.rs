mod common;

use std::collections::BTreeSet;

use comsat::generate::{generate, GenParams};
use comsat::instance::{example_plant, Instance};
use comsat::paths::PathTable;
use comsat::router::{router, RouteSet, RouterSession};
use comsat::StageResult;
use proptest::prelude::*;
use serde_json::json;

fn line(lengths: &[i64], horizon: i64, jobs: serde_json::Value) -> Instance {
    let n = lengths.len() + 1;
    common::instance(json!({
        "nodes": (1..=n).collect::<Vec<_>>(), "depot": 1,
        "edges": common::line_edges(lengths),
        "horizon": horizon, "vehicles": ["R1", "R2"], "operating_range": 100,
        "charge_coeff": 1, "discharge_coeff": 1, "jobs": jobs
    }))
}

/// Checks the visits of `set` against windows, precedences and coverage.
fn check_routes(inst: &Instance, set: &RouteSet) {
    let mut covered = BTreeSet::new();
    for r in &set.routes {
        assert_eq!(r.visits.first().unwrap().task, inst.start_task());
        assert_eq!(r.visits.last().unwrap().task, inst.end_task());
        for w in r.visits.windows(2) {
            assert!(w[1].arrival >= w[0].arrival);
        }
        for v in &r.visits[1..r.visits.len() - 1] {
            let task = inst.task(v.task);
            assert!(v.arrival >= task.window_lo && v.arrival <= task.window_hi.min(inst.horizon));
            for p in inst.jobs[v.task.job].predecessor_indices(v.task.task) {
                let before = r.visits.iter().position(|x| x.task.job == v.task.job && x.task.task == p);
                let here = r.visits.iter().position(|x| x.task == v.task);
                assert!(before < here);
            }
            assert!(covered.insert(v.task));
        }
        assert!(inst.within_range(r.length));
    }
    let regular = inst.task_refs().into_iter().filter(|t| !inst.jobs[t.job].is_synthetic()).count();
    assert_eq!(covered.len(), regular);
}

#[test]
fn task_at_depot_is_served_at_time_zero() {
    let inst = line(&[2], 10, json!({"J1": common::pickup_delivery(&["R1"], 1, 2, (0, None))}));
    let table = PathTable::enumerate(&inst, 1);
    let comb = table.shortest_combination();
    let set = router(&inst, &comb, &vec![]).unwrap().feasible().unwrap();
    assert_eq!(set.routes.len(), 1);
    let r = &set.routes[0];
    assert_eq!(r.visits[1].arrival, 0);
    assert_eq!(r.visits[2].arrival, 2);
    assert_eq!(r.length, 4);
    check_routes(&inst, &set);
}

#[test]
fn unreachable_window_is_infeasible() {
    let inst = line(&[5], 20, json!({"J1": common::pickup_delivery(&["R1"], 1, 2, (0, Some(3)))}));
    let comb = PathTable::enumerate(&inst, 1).shortest_combination();
    assert!(matches!(router(&inst, &comb, &vec![]).unwrap(), StageResult::Infeasible));
}

#[test]
fn return_must_fit_the_horizon() {
    // delivery at 5 is reachable, but the way home is not
    let inst = line(&[5], 9, json!({"J1": common::pickup_delivery(&["R1"], 1, 2, (0, None))}));
    let comb = PathTable::enumerate(&inst, 1).shortest_combination();
    assert!(matches!(router(&inst, &comb, &vec![]).unwrap(), StageResult::Infeasible));
}

#[test]
fn range_limits_route_length() {
    let mut doc: serde_json::Value = serde_json::from_str(
        &line(&[3], 20, json!({"J1": common::pickup_delivery(&["R1"], 1, 2, (0, None))})).to_json(),
    )
    .unwrap();
    doc["operating_range"] = json!(5);
    let inst = common::instance(doc);
    let comb = PathTable::enumerate(&inst, 1).shortest_combination();
    assert!(matches!(router(&inst, &comb, &vec![]).unwrap(), StageResult::Infeasible));
}

#[test]
fn plant_routes_are_valid() {
    let inst = example_plant();
    let table = PathTable::enumerate(&inst, 10);
    let comb = table.shortest_combination();
    let mut session = RouterSession::new(&inst, &comb);
    let first = session.next(None).unwrap().feasible().unwrap();
    assert!(first.routes.len() <= 4);
    check_routes(&inst, &first);
    let second = session.next(None).unwrap().feasible().unwrap();
    check_routes(&inst, &second);
    assert_ne!(first.arcs, second.arcs);
    assert!(second.routes.len() >= first.routes.len());
    assert_eq!(session.calls(), 2);
}

#[test]
fn enumeration_ends() {
    let inst = line(&[1, 1], 30, json!({
        "J1": common::pickup_delivery(&["R1"], 2, 3, (0, None)),
        "J2": common::pickup_delivery(&["R1"], 3, 2, (0, None)),
    }));
    let comb = PathTable::enumerate(&inst, 1).shortest_combination();
    let mut session = RouterSession::new(&inst, &comb);
    let mut seen = BTreeSet::new();
    let mut last = 0;
    while let StageResult::Feasible(set) = session.next(None).unwrap() {
        check_routes(&inst, &set);
        assert!(set.routes.len() >= last);
        last = set.routes.len();
        assert!(seen.insert(set.arcs.clone()));
        assert!(seen.len() < 100);
    }
    // one route per job, or both jobs in either order on one route
    assert_eq!(seen.len(), 3);
}

fn small_params() -> impl Strategy<Value = GenParams> {
    (3usize..6, 1usize..=3, 6i64..20, 0u64..1_000_000).prop_map(|(n, j, t, seed)| GenParams {
        nodes: n,
        vehicles: 2,
        jobs: j,
        edge_reduction: 0,
        horizon: t,
        seed,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn route_count_is_minimal(p in small_params()) {
        let inst = generate(&p).unwrap();
        let table = PathTable::enumerate(&inst, 2);
        let comb = table.shortest_combination();
        let got = router(&inst, &comb, &vec![]).unwrap();
        let brute = common::min_route_count(&inst, &comb);
        match got {
            StageResult::Feasible(set) => {
                check_routes(&inst, &set);
                prop_assert_eq!(Some(set.routes.len()), brute);
            }
            StageResult::Infeasible => prop_assert_eq!(brute, None),
            StageResult::Timeout => unreachable!(),
        }
    }
}
