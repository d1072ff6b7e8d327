//! Conflict-free timing of the assigned routes over nodes and edges.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::assign::Assignment;
use crate::backend::{Context, IntVar, Lit, Outcome};
use crate::instance::{Edge, Instance, NodeId, Time};
use crate::paths::PathCombination;
use crate::router::RouteSet;
use crate::{Error, StageResult};

/// Node and edge sequence of one route, with windows on task positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteTrace {
    pub route: usize,
    pub vehicle: String,
    pub nodes: Vec<NodeId>,
    /// `[lo, hi]` entry window per node position
    pub windows: Vec<(Time, Time)>,
    /// `edges[i]` joins `nodes[i]` to `nodes[i + 1]`
    pub edges: Vec<Edge>,
    /// route start from the assignment
    pub start: Time,
}

impl RouteTrace {
    pub fn length(&self) -> i64 {
        self.edges.iter().map(|e| e.length).sum()
    }
}

/// Expands routes into node/edge traces by concatenating the selected paths.
/// Consecutive visits at one location share a position whose window is the
/// intersection of theirs.
pub fn expand_routes(
    inst: &Instance,
    routes: &RouteSet,
    paths: &PathCombination,
    asg: &Assignment,
) -> Result<Vec<RouteTrace>, Error> {
    let horizon = inst.horizon;
    let mut traces = Vec::new();
    for (r, route) in routes.routes.iter().enumerate() {
        let a = asg
            .for_route(r)
            .ok_or_else(|| Error::Invalid(format!("route {r} has no assignment")))?;
        let mut nodes: Vec<NodeId> = Vec::new();
        let mut windows: Vec<(Time, Time)> = Vec::new();
        let mut edges: Vec<Edge> = Vec::new();
        for v in &route.visits {
            let task = inst.task(v.task);
            let window = (task.window_lo, task.window_hi.min(horizon));
            match nodes.last().copied() {
                None => {
                    nodes.push(task.location);
                    windows.push(window);
                }
                Some(last) if last == task.location => {
                    let w = windows.last_mut().expect("non-empty");
                    *w = (w.0.max(window.0), w.1.min(window.1));
                }
                Some(last) => {
                    let path = paths.path(last, task.location).ok_or_else(|| {
                        Error::Invalid(format!("no selected path from {last} to {}", task.location))
                    })?;
                    edges.extend(path.edges.iter().copied());
                    for &n in &path.nodes[1..] {
                        nodes.push(n);
                        windows.push((0, horizon));
                    }
                    *windows.last_mut().expect("non-empty") = window;
                }
            }
        }
        traces.push(RouteTrace {
            route: r,
            vehicle: a.vehicle.clone(),
            nodes,
            windows,
            edges,
            start: a.start,
        });
    }
    Ok(traces)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeVisit {
    pub node: NodeId,
    pub t: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeVisit {
    pub u: NodeId,
    pub v: NodeId,
    pub t: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimedTrace {
    pub route: usize,
    pub vehicle: String,
    pub nodes: Vec<NodeVisit>,
    pub edges: Vec<EdgeVisit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub traces: Vec<TimedTrace>,
    pub makespan: Time,
}

impl Schedule {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Schedule, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Intervals `[a.0, a.1]` and `[b.0, b.1]` share no integer point.
fn closed_disjoint(ctx: &mut Context, a: (IntVar, IntVar), b: (IntVar, IntVar)) -> [Lit; 2] {
    [ctx.diff_ge(a.0, b.1, 1), ctx.diff_ge(b.0, a.1, 1)]
}

/// `[a, a + la)` and `[b, b + lb)` share no integer point.
fn open_disjoint(ctx: &mut Context, a: IntVar, la: i64, b: IntVar, lb: i64) -> [Lit; 2] {
    [ctx.diff_ge(a, b, lb), ctx.diff_ge(b, a, la)]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Times every node and edge of `traces` without conflicts.
pub fn scheduler(
    inst: &Instance,
    traces: &[RouteTrace],
    strict_pairwise_edges: bool,
    deadline: Option<Instant>,
) -> Result<StageResult<Schedule>, Error> {
    let horizon = inst.horizon;
    let depot = inst.graph.depot();
    let mut ctx = Context::new();
    let mut node_t: Vec<Vec<IntVar>> = Vec::new();
    let mut edge_t: Vec<Vec<IntVar>> = Vec::new();
    for (r, tr) in traces.iter().enumerate() {
        let mut ns = Vec::new();
        for (p, &(lo, hi)) in tr.windows.iter().enumerate() {
            if lo > hi {
                return Ok(StageResult::Infeasible);
            }
            ns.push(ctx.new_int(format!("node_{r}_{p}"), lo.max(0), Some(hi.min(horizon))));
        }
        let mut es = Vec::new();
        for p in 0..tr.edges.len() {
            es.push(ctx.new_int(format!("edge_{r}_{p}"), 0, Some(horizon)));
        }
        let begin = ctx.ge(ns[0], tr.start);
        ctx.assert_lit(begin);
        for (p, e) in tr.edges.iter().enumerate() {
            let leave = ctx.diff_ge(es[p], ns[p], 0);
            ctx.assert_lit(leave);
            let lo = ctx.diff_ge(ns[p + 1], es[p], e.length);
            let hi = ctx.diff_le(ns[p + 1], es[p], e.length);
            ctx.assert_lit(lo);
            ctx.assert_lit(hi);
        }
        node_t.push(ns);
        edge_t.push(es);
    }

    // consecutive routes of one vehicle, with time to recharge for the next
    let mut by_vehicle: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (r, tr) in traces.iter().enumerate() {
        by_vehicle.entry(tr.vehicle.as_str()).or_default().push(r);
    }
    for rs in by_vehicle.values_mut() {
        rs.sort_by_key(|&r| (traces[r].start, r));
        for w in rs.windows(2) {
            let (a, b) = (w[0], w[1]);
            let gap = inst.charge_time(traces[b].length());
            let last = *node_t[a].last().expect("non-empty trace");
            let after = ctx.diff_ge(node_t[b][0], last, gap);
            ctx.assert_lit(after);
        }
    }

    // node occupancy [entry, departure]
    let mut at_node: BTreeMap<NodeId, Vec<(usize, usize)>> = BTreeMap::new();
    for (r, tr) in traces.iter().enumerate() {
        for (p, &n) in tr.nodes.iter().enumerate() {
            if n != depot {
                at_node.entry(n).or_default().push((r, p));
            }
        }
    }
    let interval = |node_t: &Vec<Vec<IntVar>>, edge_t: &Vec<Vec<IntVar>>, (r, p): (usize, usize)| {
        let leave = edge_t[r].get(p).copied().unwrap_or(node_t[r][p]);
        (node_t[r][p], leave)
    };
    for (&n, occ) in &at_node {
        let cap = inst.graph.node_capacity(n).unwrap_or(u32::MAX) as usize;
        if occ.len() <= cap {
            continue;
        }
        for group in subsets(occ.len(), cap + 1) {
            let mut clause = Vec::new();
            for (x, &i) in group.iter().enumerate() {
                for &j in &group[x + 1..] {
                    let (a, b) = (occ[i], occ[j]);
                    if a.0 == b.0 {
                        // same route: positions are ordered in time already
                        clause.push(ctx.true_lit());
                        continue;
                    }
                    let ia = interval(&node_t, &edge_t, a);
                    let ib = interval(&node_t, &edge_t, b);
                    clause.extend(closed_disjoint(&mut ctx, ia, ib));
                }
            }
            ctx.assert(Context::clause(clause));
        }
    }

    // edge occupancy [departure, departure + len)
    let mut on_edge: BTreeMap<(NodeId, NodeId), Vec<(usize, usize)>> = BTreeMap::new();
    for (r, tr) in traces.iter().enumerate() {
        for (p, e) in tr.edges.iter().enumerate() {
            on_edge.entry((e.source, e.sink)).or_default().push((r, p));
        }
    }
    for (&(u, v), occ) in &on_edge {
        let edge = *inst.graph.edge(u, v).expect("trace edges exist");
        let g = if strict_pairwise_edges {
            1
        } else {
            edge.capacity as usize
        };
        let len = edge.length;
        for (x, &a) in occ.iter().enumerate() {
            for &b in &occ[x + 1..] {
                if a.0 == b.0 {
                    continue;
                }
                let (ta, tb) = (edge_t[a.0][a.1], edge_t[b.0][b.1]);
                let c = if g == 1 {
                    open_disjoint(&mut ctx, ta, len, tb, len)
                } else {
                    [ctx.diff_ge(ta, tb, 1), ctx.diff_ge(tb, ta, 1)]
                };
                ctx.assert(Context::clause(c));
            }
        }
        if g > 1 && occ.len() > g {
            for group in subsets(occ.len(), g + 1) {
                let mut clause = Vec::new();
                for (x, &i) in group.iter().enumerate() {
                    for &j in &group[x + 1..] {
                        let (a, b) = (occ[i], occ[j]);
                        if a.0 == b.0 {
                            clause.push(ctx.true_lit());
                            continue;
                        }
                        let (ta, tb) = (edge_t[a.0][a.1], edge_t[b.0][b.1]);
                        clause.extend(open_disjoint(&mut ctx, ta, len, tb, len));
                    }
                }
                ctx.assert(Context::clause(clause));
            }
        }
        // head-on traffic is never allowed; handing over at a non-depot node
        // would be a swap, so the follower waits one more step there
        if u < v {
            if let Some(back) = on_edge.get(&(v, u)) {
                let back_len = inst.graph.edge(v, u).expect("exists").length;
                for &a in occ {
                    for &b in back {
                        if a.0 == b.0 {
                            continue;
                        }
                        let (ta, tb) = (edge_t[a.0][a.1], edge_t[b.0][b.1]);
                        let at_v = i64::from(v != depot);
                        let at_u = i64::from(u != depot);
                        let c = [
                            ctx.diff_ge(tb, ta, len + at_v),
                            ctx.diff_ge(ta, tb, back_len + at_u),
                        ];
                        ctx.assert(Context::clause(c));
                    }
                }
            }
        }
    }

    ctx.set_deadline(deadline);
    match ctx.check() {
        Outcome::Sat(model) => {
            let mut out = Vec::new();
            let mut makespan = 0;
            for (r, tr) in traces.iter().enumerate() {
                let nodes: Vec<NodeVisit> = tr
                    .nodes
                    .iter()
                    .zip(&node_t[r])
                    .map(|(&node, &x)| NodeVisit {
                        node,
                        t: model.int(x),
                    })
                    .collect();
                let edges = tr
                    .edges
                    .iter()
                    .zip(&edge_t[r])
                    .map(|(e, &x)| EdgeVisit {
                        u: e.source,
                        v: e.sink,
                        t: model.int(x),
                    })
                    .collect();
                makespan = makespan.max(nodes.last().map_or(0, |n| n.t));
                out.push(TimedTrace {
                    route: tr.route,
                    vehicle: tr.vehicle.clone(),
                    nodes,
                    edges,
                });
            }
            Ok(StageResult::Feasible(Schedule {
                traces: out,
                makespan,
            }))
        }
        Outcome::Unsat => Ok(StageResult::Infeasible),
        Outcome::Timeout => Ok(StageResult::Timeout),
    }
}
