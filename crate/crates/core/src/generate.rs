//! Seeded random instances: a connected road network, pickup/delivery jobs and
//! a fleet with random eligibility.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::instance::{Edge, Graph, Instance, NodeId, Time};
use crate::paths::k_shortest_paths;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenParams {
    pub nodes: usize,
    pub vehicles: usize,
    pub jobs: usize,
    /// percent of segments removed from the dense layout: 0, 25 or 50
    pub edge_reduction: u32,
    pub horizon: Time,
    pub seed: u64,
}

impl GenParams {
    /// Class label `N-V-J/T/R`.
    pub fn class(&self) -> String {
        format!(
            "{}-{}-{}/T{}/R{}",
            self.nodes, self.vehicles, self.jobs, self.horizon, self.edge_reduction
        )
    }
}

const RETRIES: u64 = 10;

/// Number of road segments for `n` nodes at `reduction` percent.
pub fn segment_count(n: usize, reduction: u32) -> usize {
    let dense = (n * (n - 1) / 2).min(2 * n);
    let scaled = (dense as f64 * f64::from(100 - reduction) / 100.0).round() as usize;
    scaled.max(n - 1)
}

fn draw_segments(p: &GenParams, rng: &mut ChaCha8Rng) -> Vec<(NodeId, NodeId, i64, u32)> {
    let n = p.nodes as NodeId;
    let mut order: Vec<NodeId> = (1..=n).collect();
    order.shuffle(rng);
    let mut pairs: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    // random spanning tree keeps the network connected
    for i in 1..order.len() {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        pairs.insert((a.min(b), a.max(b)));
    }
    let mut rest: Vec<(NodeId, NodeId)> = (1..=n)
        .flat_map(|a| ((a + 1)..=n).map(move |b| (a, b)))
        .filter(|q| !pairs.contains(q))
        .collect();
    rest.shuffle(rng);
    let target = segment_count(p.nodes, p.edge_reduction);
    for q in rest {
        if pairs.len() >= target {
            break;
        }
        pairs.insert(q);
    }
    pairs
        .into_iter()
        .map(|(a, b)| (a, b, rng.gen_range(1..=4), rng.gen_range(1..=2)))
        .collect()
}

fn attempt(p: &GenParams, rng: &mut ChaCha8Rng) -> Result<Instance, Error> {
    let n = p.nodes as NodeId;
    let segments = draw_segments(p, rng);
    let depot = rng.gen_range(1..=n);
    let edges: Vec<Edge> = segments
        .iter()
        .flat_map(|&(a, b, length, capacity)| {
            [
                Edge { source: a, sink: b, length, capacity },
                Edge { source: b, sink: a, length, capacity },
            ]
        })
        .collect();
    let graph = Graph::new(1..=n, edges, depot, Default::default())?;
    let dist = |a: NodeId, b: NodeId| -> i64 {
        if a == b {
            0
        } else {
            k_shortest_paths(&graph, a, b, 1).first().map_or(i64::MAX / 4, |q| q.length)
        }
    };

    let vehicles: Vec<String> = (1..=p.vehicles).map(|i| format!("R{i}")).collect();
    let t = p.horizon;
    let mut jobs = serde_json::Map::new();
    let mut range = 1;
    for j in 1..=p.jobs {
        let pickup = rng.gen_range(1..=n);
        let delivery = loop {
            let d = rng.gen_range(1..=n);
            if d != pickup {
                break d;
            }
        };
        let width = rng.gen_range(t / 4..=t / 2);
        let lo = rng.gen_range(0..=t - width);
        let eligible: Vec<&String> = loop {
            let pick: Vec<&String> = vehicles.iter().filter(|_| rng.gen_bool(0.5)).collect();
            if !pick.is_empty() {
                break pick;
            }
        };
        range = range.max(dist(depot, pickup) + dist(pickup, delivery) + dist(delivery, depot));
        jobs.insert(
            format!("J{j}"),
            json!({
                "eligible": eligible,
                "tasks": {
                    "pickup": {"location": pickup, "window": [0, null]},
                    "delivery": {"location": delivery, "window": [lo, lo + width], "precedes": ["pickup"]},
                },
            }),
        );
    }
    let doc = json!({
        "nodes": (1..=n).collect::<Vec<_>>(),
        "depot": depot,
        "edges": segments
            .iter()
            .map(|&(u, v, len, cap)| json!({"u": u, "v": v, "len": len, "cap": cap}))
            .collect::<Vec<_>>(),
        "horizon": t,
        "vehicles": vehicles,
        "operating_range": range,
        "charge_coeff": 1,
        "discharge_coeff": 1,
        "jobs": jobs,
    });
    Ok(Instance::parse(&doc.to_string())?)
}

/// A reproducible instance for `p`.
pub fn generate(p: &GenParams) -> Result<Instance, Error> {
    if p.nodes < 2 || p.vehicles < 1 || p.jobs < 1 || p.horizon < 1 || p.edge_reduction > 100 {
        return Err(Error::Invalid(format!("invalid generator parameters {p:?}")));
    }
    let mut last = None;
    for retry in 0..RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        rng.set_stream(retry);
        match attempt(p, &mut rng) {
            Ok(inst) => return Ok(inst),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::Invalid(format!(
        "no valid instance for {p:?} after {RETRIES} attempts: {}",
        last.expect("at least one attempt")
    )))
}
