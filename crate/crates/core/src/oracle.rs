//! Exhaustive discrete-time search deciding tiny instances.
//!
//! Each step every vehicle either waits or enters an outgoing edge; a task is
//! served whenever its vehicle stands on its location inside the window.
//! Vehicles serve one job at a time, recharge only at the depot between jobs,
//! and must be back at the depot by the horizon.

use std::collections::{BTreeMap, HashSet};

use crate::instance::{Instance, NodeId, Rational, Time};
use crate::validate::{is_swap, Loc};
use crate::Error;

pub const MAX_NODES: usize = 6;
pub const MAX_VEHICLES: usize = 2;
pub const MAX_JOBS: usize = 2;
pub const MAX_HORIZON: Time = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Pos {
    Node(NodeId),
    Edge { u: NodeId, v: NodeId, arrive: Time },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Vehicle {
    pos: Pos,
    battery: Rational,
    job: Option<usize>,
    prev: Option<Loc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    vehicles: Vec<Vehicle>,
    done: u32,
    owner: Vec<Option<usize>>,
}

struct TaskInfo {
    job: usize,
    location: NodeId,
    lo: Time,
    hi: Time,
    preds: u32,
}

struct Search<'a> {
    inst: &'a Instance,
    depot: NodeId,
    horizon: Time,
    tasks: Vec<TaskInfo>,
    /// bit mask of tasks per job (regular jobs, index 0-based)
    job_mask: Vec<u32>,
    eligible: Vec<Vec<bool>>,
    home: BTreeMap<NodeId, i64>,
    discharge: Rational,
    full: Rational,
    /// charge gained per step at the depot; `None` for instant recharge
    rate: Option<Rational>,
    track_battery: bool,
    track_swaps: bool,
    failed: HashSet<(Time, State)>,
}

/// Shortest distance from every node to `to`.
fn distances_to(inst: &Instance, to: NodeId) -> BTreeMap<NodeId, i64> {
    let mut dist = BTreeMap::from([(to, 0i64)]);
    let mut changed = true;
    while changed {
        changed = false;
        for e in inst.graph.edges() {
            if let Some(&d) = dist.get(&e.sink) {
                let nd = d + e.length;
                if dist.get(&e.source).is_none_or(|&old| nd < old) {
                    dist.insert(e.source, nd);
                    changed = true;
                }
            }
        }
    }
    dist
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance) -> Self {
        let mut tasks = Vec::new();
        let mut job_mask = Vec::new();
        let mut eligible = Vec::new();
        for (jx, j) in inst.regular_jobs().enumerate() {
            let job = &inst.jobs[j];
            let base = tasks.len();
            let mut mask = 0u32;
            for (k, t) in job.tasks.iter().enumerate() {
                let preds = job
                    .predecessor_indices(k)
                    .iter()
                    .fold(0u32, |m, &p| m | 1 << (base + p));
                tasks.push(TaskInfo {
                    job: jx,
                    location: t.location,
                    lo: t.window_lo,
                    hi: t.window_hi.min(inst.horizon),
                    preds,
                });
                mask |= 1 << (base + k);
            }
            job_mask.push(mask);
            eligible.push(
                inst.fleet
                    .vehicles
                    .iter()
                    .map(|v| job.eligible.contains(v))
                    .collect(),
            );
        }
        let depot = inst.graph.depot();
        let discharge = inst.fleet.discharge_coeff;
        let full = Rational::from_integer(inst.fleet.operating_range);
        let c = inst.fleet.charge_coeff;
        let rate = (c != Rational::from_integer(0)).then(|| discharge / c);
        let track_battery = discharge * inst.horizon > full;
        let track_swaps = inst
            .graph
            .nodes()
            .iter()
            .any(|&n| inst.graph.node_capacity(n).is_some_and(|cap| cap > 1));
        Search {
            inst,
            depot,
            horizon: inst.horizon,
            tasks,
            job_mask,
            eligible,
            home: distances_to(inst, depot),
            discharge,
            full,
            rate,
            track_battery,
            track_swaps,
            failed: HashSet::new(),
        }
    }

    fn can_serve(&self, st: &State, k: usize, n: NodeId, t: Time) -> bool {
        let task = &self.tasks[k];
        st.done & (1 << k) == 0
            && task.location == n
            && task.lo <= t
            && t <= task.hi
            && st.done & task.preds == task.preds
    }

    /// Serves every available task of the current job of vehicle `i`.
    fn serve_current(&self, st: &mut State, i: usize, n: NodeId, t: Time) {
        let Some(j) = st.vehicles[i].job else { return };
        loop {
            let next = (0..self.tasks.len())
                .find(|&k| self.tasks[k].job == j && self.can_serve(st, k, n, t));
            match next {
                Some(k) => st.done |= 1 << k,
                None => break,
            }
        }
        if st.done & self.job_mask[j] == self.job_mask[j] {
            st.vehicles[i].job = None;
        }
    }

    /// Every state reachable by serving tasks at `t` with vehicle `i` onwards.
    fn services(&self, st: State, i: usize, t: Time, out: &mut HashSet<State>) {
        if i == st.vehicles.len() {
            out.insert(st);
            return;
        }
        match st.vehicles[i].pos {
            Pos::Node(n) => {
                let mut options = HashSet::new();
                self.chain(st, i, n, t, &mut options);
                for s in options {
                    self.services(s, i + 1, t, out);
                }
            }
            Pos::Edge { .. } => self.services(st, i + 1, t, out),
        }
    }

    /// Serves the current job, then optionally starts further jobs here.
    fn chain(&self, mut st: State, i: usize, n: NodeId, t: Time, out: &mut HashSet<State>) {
        self.serve_current(&mut st, i, n, t);
        if st.vehicles[i].job.is_none() {
            for j in 0..self.job_mask.len() {
                let startable = st.owner[j].is_none()
                    && self.eligible[j][i]
                    && (0..self.tasks.len())
                        .any(|k| self.tasks[k].job == j && self.can_serve(&st, k, n, t));
                if startable {
                    let mut next = st.clone();
                    next.owner[j] = Some(i);
                    next.vehicles[i].job = Some(j);
                    self.chain(next, i, n, t, out);
                }
            }
        }
        out.insert(st);
    }

    fn alive(&self, st: &State, t: Time) -> bool {
        let all = (1u32 << self.tasks.len()) - 1;
        for (k, task) in self.tasks.iter().enumerate() {
            if st.done & (1 << k) == 0 && task.hi <= t {
                return false;
            }
        }
        if t == self.horizon {
            return st.done == all
                && st.vehicles.iter().all(|v| v.pos == Pos::Node(self.depot));
        }
        st.vehicles.iter().all(|v| {
            let (at, from) = match v.pos {
                Pos::Node(n) => (t, n),
                Pos::Edge { v, arrive, .. } => (arrive, v),
            };
            let d = self.home[&from];
            at + d <= self.horizon && (!self.track_battery || v.battery >= self.discharge * d)
        })
    }

    fn search(&mut self, t: Time, st: State) -> bool {
        if self.failed.contains(&(t, st.clone())) {
            return false;
        }
        let mut served = HashSet::new();
        self.services(st.clone(), 0, t, &mut served);
        for s in served {
            if !self.alive(&s, t) {
                continue;
            }
            if t == self.horizon {
                return true;
            }
            if self.moves(t, &s) {
                return true;
            }
        }
        self.failed.insert((t, st));
        false
    }

    /// Tries every joint move at `t`.
    fn moves(&mut self, t: Time, st: &State) -> bool {
        // per vehicle: None = wait / keep driving, Some(edge) = depart
        let mut options: Vec<Vec<Option<(NodeId, NodeId, i64)>>> = Vec::new();
        for v in &st.vehicles {
            match v.pos {
                Pos::Node(n) => {
                    let mut o = vec![None];
                    for e in self.inst.graph.out_edges(n) {
                        let d = self.home[&e.sink];
                        let time_ok = t + e.length + d <= self.horizon;
                        let charge_ok = !self.track_battery
                            || v.battery >= self.discharge * (e.length + d);
                        if time_ok && charge_ok {
                            o.push(Some((e.source, e.sink, e.length)));
                        }
                    }
                    options.push(o);
                }
                Pos::Edge { .. } => options.push(vec![None]),
            }
        }
        let mut choice = vec![0usize; options.len()];
        loop {
            let picked: Vec<Option<(NodeId, NodeId, i64)>> =
                choice.iter().zip(&options).map(|(&c, o)| o[c]).collect();
            if let Some(next) = self.step(t, st, &picked) {
                if self.search(t + 1, next) {
                    return true;
                }
            }
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                return false;
            }
        }
    }

    /// Applies a joint move; `None` when it breaks a capacity or swaps.
    fn step(&self, t: Time, st: &State, picked: &[Option<(NodeId, NodeId, i64)>]) -> Option<State> {
        let graph = &self.inst.graph;
        let mut count: BTreeMap<Loc, usize> = BTreeMap::new();
        let mut main = Vec::with_capacity(picked.len());
        for (v, p) in st.vehicles.iter().zip(picked) {
            match (v.pos, p) {
                (Pos::Node(n), None) => {
                    *count.entry(Loc::Node(n)).or_default() += 1;
                    main.push(Loc::Node(n));
                }
                (Pos::Node(n), Some((a, b, _))) => {
                    *count.entry(Loc::Node(n)).or_default() += 1;
                    *count.entry(Loc::Edge(*a, *b)).or_default() += 1;
                    main.push(Loc::Edge(*a, *b));
                }
                (Pos::Edge { u, v, .. }, _) => {
                    *count.entry(Loc::Edge(u, v)).or_default() += 1;
                    main.push(Loc::Edge(u, v));
                }
            }
        }
        for (&loc, &c) in &count {
            match loc {
                Loc::Node(n) => {
                    if n != self.depot && c > graph.node_capacity(n).unwrap_or(u32::MAX) as usize {
                        return None;
                    }
                }
                Loc::Edge(u, v) => {
                    let cap = graph.edge(u, v).expect("graph edge").capacity as usize;
                    if c > cap || count.contains_key(&Loc::Edge(v, u)) {
                        return None;
                    }
                }
            }
        }
        if self.track_swaps {
            for a in 0..main.len() {
                for b in (a + 1)..main.len() {
                    if let (Some(pa), Some(pb)) = (st.vehicles[a].prev, st.vehicles[b].prev) {
                        if is_swap((pa, main[a]), (pb, main[b]), self.depot) {
                            return None;
                        }
                    }
                }
            }
        }

        let mut next = st.clone();
        for (i, (v, p)) in next.vehicles.iter_mut().zip(picked).enumerate() {
            v.prev = self.track_swaps.then_some(main[i]);
            match (v.pos, p) {
                (Pos::Node(n), None) => {
                    if n == self.depot && v.job.is_none() && self.track_battery {
                        v.battery = match self.rate {
                            Some(r) => (v.battery + r).min(self.full),
                            None => self.full,
                        };
                    }
                }
                (Pos::Node(_), Some((a, b, len))) => {
                    if self.track_battery {
                        v.battery -= self.discharge * *len;
                    }
                    v.pos = if *len == 1 {
                        Pos::Node(*b)
                    } else {
                        Pos::Edge {
                            u: *a,
                            v: *b,
                            arrive: t + len,
                        }
                    };
                }
                (Pos::Edge { v: sink, arrive, .. }, _) => {
                    if arrive == t + 1 {
                        v.pos = Pos::Node(sink);
                    }
                }
            }
        }
        Some(next)
    }
}

/// Decides `inst` exactly. Refuses instances above the size caps.
pub fn brute_oracle(inst: &Instance) -> Result<OracleVerdict, Error> {
    let nodes = inst.graph.nodes().len();
    let vehicles = inst.fleet.vehicles.len();
    let jobs = inst.num_regular_jobs();
    if nodes > MAX_NODES || vehicles > MAX_VEHICLES || jobs > MAX_JOBS || inst.horizon > MAX_HORIZON {
        return Err(Error::Invalid(format!(
            "instance too large for the oracle: {nodes} nodes, {vehicles} vehicles, {jobs} jobs, horizon {}",
            inst.horizon
        )));
    }
    let task_count: usize = inst.regular_jobs().map(|j| inst.jobs[j].tasks.len()).sum();
    if task_count > 31 {
        return Err(Error::Invalid("too many tasks for the oracle".into()));
    }
    let mut search = Search::new(inst);
    let full = search.full;
    let track = search.track_battery;
    let start = State {
        vehicles: (0..vehicles)
            .map(|_| Vehicle {
                pos: Pos::Node(search.depot),
                battery: if track { full } else { Rational::from_integer(0) },
                job: None,
                prev: None,
            })
            .collect(),
        done: 0,
        owner: vec![None; jobs],
    };
    Ok(if search.search(0, start) {
        OracleVerdict::Feasible
    } else {
        OracleVerdict::Infeasible
    })
}
