#![allow(dead_code)]

use comsat::instance::{Instance, NodeId, TaskRef, Time};
use comsat::paths::{Path, PathCombination, PathTable};
use serde_json::{json, Value};

pub fn instance(doc: Value) -> Instance {
    Instance::parse(&doc.to_string()).expect("valid test instance")
}

/// Undirected path graph `1 - 2 - ... - n` with the given segment lengths.
pub fn line_edges(lengths: &[i64]) -> Value {
    let edges: Vec<Value> = lengths
        .iter()
        .enumerate()
        .map(|(i, &len)| json!({"u": i + 1, "v": i + 2, "len": len, "cap": 1}))
        .collect();
    Value::Array(edges)
}

/// A job with one pickup and one delivery.
pub fn pickup_delivery(eligible: &[&str], pickup: NodeId, delivery: NodeId, window: (Time, Option<Time>)) -> Value {
    json!({
        "eligible": eligible,
        "tasks": {
            "1": {"location": pickup, "window": [0, null]},
            "2": {"location": delivery, "window": [window.0, window.1], "precedes": ["1"]},
        }
    })
}

/// Every ordering of `items`.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Every partition of `items` into non-empty blocks.
pub fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for p in partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = p.clone();
        q.insert(0, vec![first]);
        out.push(q);
    }
    out
}

/// Orders of the tasks of job `j` that respect its precedences.
fn task_orders(inst: &Instance, j: usize) -> Vec<Vec<usize>> {
    let job = &inst.jobs[j];
    let idx: Vec<usize> = (0..job.tasks.len()).collect();
    permutations(&idx)
        .into_iter()
        .filter(|order| {
            order.iter().enumerate().all(|(i, &k)| {
                job.predecessor_indices(k)
                    .iter()
                    .all(|p| order[..i].contains(p))
            })
        })
        .collect()
}

/// Whether one depot-to-depot route can serve `jobs` (in some order) under
/// the distances of `comb`, ignoring vehicles.
pub fn route_feasible(inst: &Instance, comb: &PathCombination, jobs: &[usize]) -> bool {
    let depot = inst.graph.depot();
    let d = |a: NodeId, b: NodeId| comb.distance(a, b);
    for job_order in permutations(jobs) {
        let mut seqs: Vec<Vec<TaskRef>> = vec![vec![]];
        for &j in &job_order {
            let mut next = Vec::new();
            for s in &seqs {
                for order in task_orders(inst, j) {
                    let mut t = s.clone();
                    t.extend(order.iter().map(|&k| TaskRef { job: j, task: k }));
                    next.push(t);
                }
            }
            seqs = next;
        }
        for seq in seqs {
            let mut at = depot;
            let mut time: Time = 0;
            let mut length = 0;
            let mut ok = true;
            for t in &seq {
                let task = inst.task(*t);
                length += d(at, task.location);
                time = (time + d(at, task.location))
                    .max(task.window_lo)
                    .max(d(depot, task.location));
                if time > task.window_hi.min(inst.horizon) {
                    ok = false;
                    break;
                }
                at = task.location;
            }
            length += d(at, depot);
            time += d(at, depot);
            if ok && time <= inst.horizon && inst.within_range(length) {
                return true;
            }
        }
    }
    false
}

/// Fewest routes covering every job, by exhaustive search over groupings and
/// orders; `None` when no grouping works.
pub fn min_route_count(inst: &Instance, comb: &PathCombination) -> Option<usize> {
    let jobs: Vec<usize> = inst.regular_jobs().collect();
    partitions(&jobs)
        .into_iter()
        .filter(|p| p.iter().all(|block| route_feasible(inst, comb, block)))
        .map(|p| p.len())
        .min()
}

/// Synthetic path with `hops` nodes and metric `length`.
pub fn fake_path(hops: usize, length: i64) -> Path {
    Path {
        nodes: (0..hops as NodeId).collect(),
        edges: vec![],
        length,
    }
}

/// Minimal total hop count over every combination of `table`.
pub fn brute_min_hops(table: &PathTable) -> i64 {
    all_selections(table)
        .iter()
        .map(|s| hops_of(table, s))
        .min()
        .expect("at least one combination")
}

pub fn hops_of(table: &PathTable, selection: &[usize]) -> i64 {
    selection
        .iter()
        .zip(&table.candidates)
        .map(|(&r, c)| c[r].hops())
        .sum()
}

/// Every selection vector of `table`.
pub fn all_selections(table: &PathTable) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for c in &table.candidates {
        let mut next = Vec::new();
        for s in &out {
            for r in 0..c.len() {
                let mut t = s.clone();
                t.push(r);
                next.push(t);
            }
        }
        out = next;
    }
    out
}
