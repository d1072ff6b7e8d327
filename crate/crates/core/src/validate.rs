//! Independent schedule checker: replays a schedule one time step at a time
//! and checks windows, precedence, eligibility, charge and capacities.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::assign::Assignment;
use crate::instance::{Instance, NodeId, Time};
use crate::schedule::{Schedule, TimedTrace};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Window,
    NodeCapacity,
    EdgeCapacity,
    Swap,
    Charge,
    Eligibility,
    Continuity,
    Precedence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub time: Time,
    pub entities: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn new(violations: Vec<Violation>) -> Self {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Where a vehicle is at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Loc {
    Node(NodeId),
    Edge(NodeId, NodeId),
}

impl Loc {
    /// Endpoints of the road segment, unordered.
    pub fn segment(self) -> Option<(NodeId, NodeId)> {
        match self {
            Loc::Edge(u, v) => Some((u.min(v), u.max(v))),
            Loc::Node(_) => None,
        }
    }
}

/// Segment-level swap: one vehicle leaves node `n` onto a segment while the
/// other comes off that segment into `n`.
pub fn is_swap(a: (Loc, Loc), b: (Loc, Loc), depot: NodeId) -> bool {
    let one_way = |x: (Loc, Loc), y: (Loc, Loc)| match (x.0, y.1) {
        (Loc::Node(n), Loc::Node(m)) if n == m && n != depot => {
            x.1.segment().is_some()
                && x.1.segment() == y.0.segment()
                && matches!(x.1, Loc::Edge(s, _) if s == n)
                && matches!(y.0, Loc::Edge(_, s) if s == n)
        }
        _ => false,
    };
    one_way(a, b) || one_way(b, a)
}

fn edge_len(inst: &Instance, u: NodeId, v: NodeId) -> i64 {
    inst.graph.edge(u, v).map_or(1, |e| e.length)
}

/// Locations occupied by a trace at `t`, and the main one. A vehicle at its
/// departure instant occupies both the node and the edge; its main location
/// is the edge.
pub fn occupancy(inst: &Instance, trace: &TimedTrace, t: Time) -> (Vec<Loc>, Option<Loc>) {
    let mut occupied = Vec::new();
    let mut main = None;
    for (p, nv) in trace.nodes.iter().enumerate() {
        let leave = trace.edges.get(p).map_or(nv.t, |e| e.t);
        if nv.t <= t && t <= leave {
            occupied.push(Loc::Node(nv.node));
            main.get_or_insert(Loc::Node(nv.node));
        }
    }
    for e in &trace.edges {
        if e.t <= t && t < e.t + edge_len(inst, e.u, e.v) {
            occupied.push(Loc::Edge(e.u, e.v));
            main = Some(Loc::Edge(e.u, e.v));
        }
    }
    (occupied, main)
}

/// Capacity and swap violations found by stepping through time.
pub fn replay(inst: &Instance, sched: &Schedule) -> Vec<Violation> {
    let depot = inst.graph.depot();
    let last = sched
        .traces
        .iter()
        .flat_map(|tr| tr.nodes.iter().map(|n| n.t))
        .max()
        .unwrap_or(0);
    let mut out = Vec::new();
    let mut prev_main: Vec<Option<Loc>> = vec![None; sched.traces.len()];
    for t in 0..=last {
        let mut at: BTreeMap<Loc, Vec<usize>> = BTreeMap::new();
        let mut main = Vec::with_capacity(sched.traces.len());
        for (i, tr) in sched.traces.iter().enumerate() {
            let (locs, m) = occupancy(inst, tr, t);
            for l in locs.into_iter().collect::<BTreeSet<_>>() {
                at.entry(l).or_default().push(i);
            }
            main.push(m);
        }
        let names = |ids: &[usize]| -> Vec<String> {
            ids.iter()
                .map(|&i| format!("route {} ({})", sched.traces[i].route, sched.traces[i].vehicle))
                .collect()
        };
        for (loc, ids) in &at {
            match *loc {
                Loc::Node(n) if n != depot => {
                    let cap = inst.graph.node_capacity(n).unwrap_or(u32::MAX) as usize;
                    if ids.len() > cap {
                        let mut entities = vec![format!("node {n}")];
                        entities.extend(names(ids));
                        out.push(Violation {
                            kind: ViolationKind::NodeCapacity,
                            time: t,
                            entities,
                        });
                    }
                }
                Loc::Node(_) => {}
                Loc::Edge(u, v) => {
                    let cap = inst.graph.edge(u, v).map_or(1, |e| e.capacity) as usize;
                    if ids.len() > cap {
                        let mut entities = vec![format!("edge {u}->{v}")];
                        entities.extend(names(ids));
                        out.push(Violation {
                            kind: ViolationKind::EdgeCapacity,
                            time: t,
                            entities,
                        });
                    }
                    if u < v {
                        if let Some(back) = at.get(&Loc::Edge(v, u)) {
                            let mut entities = vec![format!("edge {u}-{v} head-on")];
                            entities.extend(names(ids));
                            entities.extend(names(back));
                            out.push(Violation {
                                kind: ViolationKind::EdgeCapacity,
                                time: t,
                                entities,
                            });
                        }
                    }
                }
            }
        }
        for a in 0..main.len() {
            for b in (a + 1)..main.len() {
                if let (Some(pa), Some(pb), Some(ma), Some(mb)) =
                    (prev_main[a], prev_main[b], main[a], main[b])
                {
                    if is_swap((pa, ma), (pb, mb), depot) {
                        out.push(Violation {
                            kind: ViolationKind::Swap,
                            time: t,
                            entities: names(&[a, b]),
                        });
                    }
                }
            }
        }
        prev_main = main;
    }
    out
}

/// A way of serving one job from one trace.
#[derive(Debug, Clone)]
struct Placement {
    trace: usize,
    first: usize,
    last: usize,
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Clone, Copy)]
enum Failure {
    Location,
    Precedence,
    Window,
    Eligibility,
}

fn place_job(
    inst: &Instance,
    sched: &Schedule,
    j: usize,
) -> Result<Vec<Placement>, (Failure, Time)> {
    let job = &inst.jobs[j];
    let m = job.tasks.len();
    let preds: Vec<Vec<usize>> = (0..m).map(|k| job.predecessor_indices(k)).collect();
    let mut ok = Vec::new();
    let mut best = (Failure::Location, inst.horizon);
    for (r, tr) in sched.traces.iter().enumerate() {
        let options: Vec<Vec<usize>> = job
            .tasks
            .iter()
            .map(|task| {
                tr.nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| n.node == task.location)
                    .map(|(p, _)| p)
                    .collect()
            })
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        let mut choice = vec![0usize; m];
        loop {
            let pos: Vec<usize> = (0..m).map(|k| options[k][choice[k]]).collect();
            let time = |k: usize| tr.nodes[pos[k]].t;
            let precedence = (0..m).all(|k| {
                preds[k]
                    .iter()
                    .all(|&p| pos[p] <= pos[k] && time(p) <= time(k))
            });
            let late = (0..m).find(|&k| {
                let task = &job.tasks[k];
                time(k) < task.window_lo || time(k) > task.window_hi.min(inst.horizon)
            });
            let eligible = job.eligible.contains(&tr.vehicle);
            let status = if !precedence {
                Some((Failure::Precedence, time(0)))
            } else if let Some(k) = late {
                Some((Failure::Window, time(k)))
            } else if !eligible {
                Some((Failure::Eligibility, time(0)))
            } else {
                None
            };
            match status {
                None => ok.push(Placement {
                    trace: r,
                    first: *pos.iter().min().expect("non-empty job"),
                    last: *pos.iter().max().expect("non-empty job"),
                }),
                Some(f) => best = best.max(f),
            }
            // next combination
            let mut k = 0;
            while k < m {
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == m {
                break;
            }
        }
    }
    if ok.is_empty() {
        Err(best)
    } else {
        Ok(ok)
    }
}

/// Picks one placement per job so that jobs on the same trace do not interleave.
fn match_jobs(options: &[(usize, Vec<Placement>)], chosen: &mut Vec<Placement>) -> bool {
    let Some(((_, opts), rest)) = options.split_first() else {
        return true;
    };
    for p in opts {
        let clash = chosen
            .iter()
            .any(|c| c.trace == p.trace && !(c.last <= p.first || p.last <= c.first));
        if clash {
            continue;
        }
        chosen.push(p.clone());
        if match_jobs(rest, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn check_structure(inst: &Instance, sched: &Schedule, asg: &Assignment) -> Result<(), Error> {
    let mut routes = BTreeSet::new();
    for tr in &sched.traces {
        if !routes.insert(tr.route) {
            return Err(Error::Invalid(format!("route {} appears twice", tr.route)));
        }
        if asg.for_route(tr.route).is_none() {
            return Err(Error::Invalid(format!("route {} has no assignment", tr.route)));
        }
        if !inst.fleet.vehicles.contains(&tr.vehicle) {
            return Err(Error::Invalid(format!("unknown vehicle {}", tr.vehicle)));
        }
        if tr.nodes.is_empty() {
            return Err(Error::Invalid(format!("route {} visits no node", tr.route)));
        }
        if tr.edges.len() + 1 != tr.nodes.len() {
            return Err(Error::Invalid(format!(
                "route {} has {} nodes but {} edges",
                tr.route,
                tr.nodes.len(),
                tr.edges.len()
            )));
        }
        for n in &tr.nodes {
            if !inst.graph.contains(n.node) {
                return Err(Error::Invalid(format!("unknown node {}", n.node)));
            }
        }
    }
    Ok(())
}

/// Checks `sched` and `asg` against every requirement of `inst`.
pub fn validate(inst: &Instance, sched: &Schedule, asg: &Assignment) -> Result<ValidationReport, Error> {
    check_structure(inst, sched, asg)?;
    let depot = inst.graph.depot();
    let mut out = Vec::new();
    let v = |kind, time, entities: Vec<String>| Violation { kind, time, entities };

    for tr in &sched.traces {
        let name = format!("route {}", tr.route);
        let a = asg.for_route(tr.route).expect("checked");
        let first = &tr.nodes[0];
        let last = tr.nodes.last().expect("checked");
        if a.vehicle != tr.vehicle {
            out.push(v(ViolationKind::Continuity, first.t, vec![name.clone(), tr.vehicle.clone()]));
        }
        if first.t < a.start.max(0) {
            out.push(v(ViolationKind::Continuity, first.t, vec![name.clone(), "starts early".into()]));
        }
        if first.node != depot || last.node != depot {
            out.push(v(ViolationKind::Continuity, last.t, vec![name.clone(), "not depot to depot".into()]));
        }
        if last.t > inst.horizon {
            out.push(v(ViolationKind::Window, last.t, vec![name.clone(), "ends after the horizon".into()]));
        }
        for (p, e) in tr.edges.iter().enumerate() {
            let (from, to) = (&tr.nodes[p], &tr.nodes[p + 1]);
            let ent = vec![name.clone(), format!("edge {}->{}", e.u, e.v)];
            match inst.graph.edge(e.u, e.v) {
                Some(edge) if e.u == from.node && e.v == to.node => {
                    if e.t < from.t || to.t != e.t + edge.length {
                        out.push(v(ViolationKind::Continuity, e.t, ent));
                    }
                }
                _ => out.push(v(ViolationKind::Continuity, e.t, ent)),
            }
        }
        let length: i64 = tr.edges.iter().map(|e| edge_len(inst, e.u, e.v)).sum();
        if !inst.within_range(length) {
            out.push(v(ViolationKind::Charge, first.t, vec![name, format!("length {length}")]));
        }
    }

    // trips of one vehicle follow each other with time to recharge
    let mut by_vehicle: BTreeMap<&str, Vec<&TimedTrace>> = BTreeMap::new();
    for tr in &sched.traces {
        by_vehicle.entry(tr.vehicle.as_str()).or_default().push(tr);
    }
    for (vehicle, trs) in &mut by_vehicle {
        trs.sort_by_key(|tr| (tr.nodes[0].t, tr.route));
        for w in trs.windows(2) {
            let end = w[0].nodes.last().expect("checked").t;
            let start = w[1].nodes[0].t;
            let length: i64 = w[1].edges.iter().map(|e| edge_len(inst, e.u, e.v)).sum();
            let ent = vec![vehicle.to_string(), format!("routes {} and {}", w[0].route, w[1].route)];
            if start < end {
                out.push(v(ViolationKind::Continuity, start, ent));
            } else if start - end < inst.charge_time(length) {
                out.push(v(ViolationKind::Charge, start, ent));
            }
        }
    }

    // every job served once, by an eligible vehicle, in order
    let mut options = Vec::new();
    for j in inst.regular_jobs() {
        match place_job(inst, sched, j) {
            Ok(p) => options.push((j, p)),
            Err((failure, time)) => {
                let kind = match failure {
                    Failure::Location | Failure::Window => ViolationKind::Window,
                    Failure::Precedence => ViolationKind::Precedence,
                    Failure::Eligibility => ViolationKind::Eligibility,
                };
                out.push(v(kind, time, vec![format!("job {}", inst.jobs[j].id)]));
            }
        }
    }
    if options.len() == inst.num_regular_jobs() && !match_jobs(&options, &mut Vec::new()) {
        let jobs = options.iter().map(|(j, _)| format!("job {}", inst.jobs[*j].id)).collect();
        out.push(v(ViolationKind::Precedence, 0, jobs));
    }

    out.extend(replay(inst, sched));
    Ok(ValidationReport::new(out))
}
