//! Problem data: plant graph, jobs with time windows, fleet and battery
//! parameters, plus the JSON instance format.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type NodeId = u32;
pub type Time = i64;
pub type Rational = Ratio<i64>;

pub const START: &str = "start";
pub const END: &str = "end";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Semantic(String),
}

fn semantic<T>(msg: impl Into<String>) -> Result<T, InstanceError> {
    Err(InstanceError::Semantic(msg.into()))
}

/// Directed road segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: NodeId,
    pub sink: NodeId,
    pub length: i64,
    pub capacity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    depot: NodeId,
    node_capacity: BTreeMap<NodeId, u32>,
    out: BTreeMap<NodeId, Vec<usize>>,
    index: BTreeMap<(NodeId, NodeId), usize>,
}

impl Graph {
    /// Builds a graph; edges are directed.
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: Vec<Edge>,
        depot: NodeId,
        node_capacity: BTreeMap<NodeId, u32>,
    ) -> Result<Self, InstanceError> {
        let node_set: BTreeSet<NodeId> = nodes.into_iter().collect();
        if node_set.is_empty() {
            return semantic("graph has no nodes");
        }
        if !node_set.contains(&depot) {
            return semantic(format!("depot {depot} not a node"));
        }
        let mut edges = edges;
        edges.sort();
        let mut out: BTreeMap<NodeId, Vec<usize>> =
            node_set.iter().map(|&n| (n, Vec::new())).collect();
        let mut index = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            for n in [e.source, e.sink] {
                if !node_set.contains(&n) {
                    return semantic(format!(
                        "unknown node {n} in edge ({}, {})",
                        e.source, e.sink
                    ));
                }
            }
            if e.source == e.sink {
                return semantic(format!("self loop on node {}", e.source));
            }
            if e.length < 1 {
                return semantic(format!("edge ({}, {}) has length < 1", e.source, e.sink));
            }
            if e.capacity < 1 {
                return semantic(format!("edge ({}, {}) has capacity < 1", e.source, e.sink));
            }
            if index.insert((e.source, e.sink), i).is_some() {
                return semantic(format!("duplicate edge ({}, {})", e.source, e.sink));
            }
            out.get_mut(&e.source).expect("checked").push(i);
        }
        for (&n, &c) in &node_capacity {
            if !node_set.contains(&n) {
                return semantic(format!("unknown node {n} in node_capacity"));
            }
            if c < 1 {
                return semantic(format!("node {n} has capacity < 1"));
            }
        }
        let g = Graph {
            nodes: node_set.into_iter().collect(),
            edges,
            depot,
            node_capacity,
            out,
            index,
        };
        if !g.is_strongly_connected() {
            return semantic("graph not strongly connected");
        }
        Ok(g)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn depot(&self) -> NodeId {
        self.depot
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.out.contains_key(&n)
    }

    pub fn edge(&self, source: NodeId, sink: NodeId) -> Option<&Edge> {
        self.index.get(&(source, sink)).map(|&i| &self.edges[i])
    }

    /// Outgoing edges of `n`, sorted by sink.
    pub fn out_edges(&self, n: NodeId) -> impl Iterator<Item = &Edge> {
        self.out
            .get(&n)
            .into_iter()
            .flatten()
            .map(|&i| &self.edges[i])
    }

    /// `None` means unbounded (the depot).
    pub fn node_capacity(&self, n: NodeId) -> Option<u32> {
        if n == self.depot {
            None
        } else {
            Some(self.node_capacity.get(&n).copied().unwrap_or(1))
        }
    }

    pub fn node_capacity_overrides(&self) -> &BTreeMap<NodeId, u32> {
        &self.node_capacity
    }

    fn reach(&self, from: NodeId, reverse: bool) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(n) = queue.pop_front() {
            for e in &self.edges {
                let (a, b) = if reverse {
                    (e.sink, e.source)
                } else {
                    (e.source, e.sink)
                };
                if a == n && seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        let all = self.nodes.len();
        self.reach(self.depot, false).len() == all && self.reach(self.depot, true).len() == all
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub id: String,
    pub location: NodeId,
    pub window_lo: Time,
    pub window_hi: Time,
    pub predecessors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub id: String,
    pub tasks: Vec<Task>,
    pub eligible: Vec<String>,
}

impl Job {
    pub fn is_synthetic(&self) -> bool {
        self.id == START || self.id == END
    }

    pub fn task_index(&self, id: &str) -> Option<usize> {
        self.tasks.iter().position(|t| t.id == id)
    }

    /// Indices of the predecessors of task `k`.
    pub fn predecessor_indices(&self, k: usize) -> Vec<usize> {
        self.tasks[k]
            .predecessors
            .iter()
            .map(|p| self.task_index(p).expect("validated"))
            .collect()
    }
}

/// (job index, task index) into [`Instance::jobs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaskRef {
    pub job: usize,
    pub task: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fleet {
    pub vehicles: Vec<String>,
    pub operating_range: i64,
    pub charge_coeff: Rational,
    pub discharge_coeff: Rational,
}

/// A validated instance. Jobs are ordered `start`, the regular jobs by id, `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub jobs: Vec<Job>,
    pub fleet: Fleet,
    pub horizon: Time,
}

/// Per job, the indices of jobs sharing no eligible vehicle with it.
pub type MutexSets = Vec<BTreeSet<usize>>;

impl Instance {
    pub fn start_job(&self) -> usize {
        0
    }

    pub fn end_job(&self) -> usize {
        self.jobs.len() - 1
    }

    pub fn start_task(&self) -> TaskRef {
        TaskRef { job: 0, task: 0 }
    }

    pub fn end_task(&self) -> TaskRef {
        TaskRef {
            job: self.end_job(),
            task: 0,
        }
    }

    /// Regular (non-synthetic) job indices.
    pub fn regular_jobs(&self) -> std::ops::Range<usize> {
        1..self.jobs.len() - 1
    }

    pub fn num_regular_jobs(&self) -> usize {
        self.jobs.len() - 2
    }

    pub fn task(&self, t: TaskRef) -> &Task {
        &self.jobs[t.job].tasks[t.task]
    }

    pub fn job_index(&self, id: &str) -> Option<usize> {
        self.jobs.iter().position(|j| j.id == id)
    }

    /// Every task, synthetic ones included, in job order.
    pub fn task_refs(&self) -> Vec<TaskRef> {
        self.jobs
            .iter()
            .enumerate()
            .flat_map(|(j, job)| (0..job.tasks.len()).map(move |k| TaskRef { job: j, task: k }))
            .collect()
    }

    /// Distinct task locations, depot included, sorted.
    pub fn task_locations(&self) -> Vec<NodeId> {
        let mut locs: BTreeSet<NodeId> = self
            .jobs
            .iter()
            .flat_map(|j| j.tasks.iter().map(|t| t.location))
            .collect();
        locs.insert(self.graph.depot());
        locs.into_iter().collect()
    }

    pub fn mutex_sets(&self) -> MutexSets {
        let sets: Vec<BTreeSet<&str>> = self
            .jobs
            .iter()
            .map(|j| j.eligible.iter().map(String::as_str).collect())
            .collect();
        (0..self.jobs.len())
            .map(|a| {
                (0..self.jobs.len())
                    .filter(|&b| b != a && sets[a].is_disjoint(&sets[b]))
                    .collect()
            })
            .collect()
    }

    /// `ceil(C * distance)`: recharge time needed before driving `distance`.
    pub fn charge_time(&self, distance: i64) -> Time {
        (self.fleet.charge_coeff * distance).ceil().to_integer()
    }

    /// Whether `D * distance <= OR`.
    pub fn within_range(&self, distance: i64) -> bool {
        self.fleet.discharge_coeff * distance <= Rational::from_integer(self.fleet.operating_range)
    }

    pub fn parse(text: &str) -> Result<Instance, InstanceError> {
        let raw: RawInstance = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        raw.into_instance()
    }

    pub fn from_reader(reader: impl std::io::Read) -> Result<Instance, InstanceError> {
        let mut text = String::new();
        let mut reader = reader;
        reader
            .read_to_string(&mut text)
            .map_err(|e| InstanceError::Semantic(format!("read failed: {e}")))?;
        Instance::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawInstance::from_instance(self)).expect("serializable")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    u: NodeId,
    v: NodeId,
    len: i64,
    cap: u32,
    #[serde(default)]
    directed: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    location: NodeId,
    window: (Time, Option<Time>),
    #[serde(default)]
    precedes: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    eligible: Vec<String>,
    tasks: BTreeMap<String, RawTask>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    nodes: Vec<NodeId>,
    depot: NodeId,
    edges: Vec<RawEdge>,
    horizon: Time,
    vehicles: Vec<String>,
    operating_range: i64,
    charge_coeff: serde_json::Number,
    discharge_coeff: serde_json::Number,
    jobs: BTreeMap<String, RawJob>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    node_capacity: BTreeMap<NodeId, u32>,
}

/// Exact value of a JSON number written in decimal or exponent notation.
fn exact_rational(n: &serde_json::Number) -> Result<Rational, InstanceError> {
    if let Some(i) = n.as_i64() {
        return Ok(Rational::from_integer(i));
    }
    let f = n
        .as_f64()
        .ok_or_else(|| InstanceError::Semantic(format!("number {n} out of range")))?;
    if !f.is_finite() {
        return semantic(format!("number {n} out of range"));
    }
    parse_decimal(&format!("{f}"))
        .ok_or_else(|| InstanceError::Semantic(format!("number {n} not representable")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let all: String = format!("{int}{frac}");
    let mut num: i64 = all.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i32;
    let pow = 10i64.checked_pow(scale.unsigned_abs())?;
    if scale >= 0 {
        Some(Rational::from_integer(num.checked_mul(pow)?))
    } else {
        Some(Rational::new(num, pow))
    }
}

fn rational_to_number(r: Rational) -> serde_json::Number {
    if r.is_integer() {
        return serde_json::Number::from(r.to_integer());
    }
    let f = *r.numer() as f64 / *r.denom() as f64;
    serde_json::Number::from_f64(f).expect("finite")
}

/// True when every transitive predecessor chain is acyclic.
fn acyclic(preds: &[Vec<usize>]) -> bool {
    let n = preds.len();
    let mut state = vec![0u8; n];
    fn visit(v: usize, preds: &[Vec<usize>], state: &mut [u8]) -> bool {
        match state[v] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        state[v] = 1;
        for &p in &preds[v] {
            if !visit(p, preds, state) {
                return false;
            }
        }
        state[v] = 2;
        true
    }
    (0..n).all(|v| visit(v, preds, &mut state))
}

fn transitive_preds(preds: &[Vec<usize>], k: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut stack = preds[k].clone();
    while let Some(p) = stack.pop() {
        if seen.insert(p) {
            stack.extend(preds[p].iter().copied());
        }
    }
    seen
}

impl RawInstance {
    fn into_instance(self) -> Result<Instance, InstanceError> {
        if self.horizon < 0 {
            return semantic("horizon must be non-negative");
        }
        if self.operating_range < 1 {
            return semantic("operating_range must be at least 1");
        }
        let charge = exact_rational(&self.charge_coeff)?;
        let discharge = exact_rational(&self.discharge_coeff)?;
        if charge < Rational::from_integer(0) {
            return semantic("charge_coeff must be non-negative");
        }
        if discharge <= Rational::from_integer(0) {
            return semantic("discharge_coeff must be positive");
        }
        let mut vehicles = self.vehicles.clone();
        vehicles.sort();
        vehicles.dedup();
        if vehicles.len() != self.vehicles.len() {
            return semantic("duplicate vehicle identifier");
        }

        let mut edges = Vec::new();
        for e in &self.edges {
            edges.push(Edge {
                source: e.u,
                sink: e.v,
                length: e.len,
                capacity: e.cap,
            });
            if !e.directed {
                edges.push(Edge {
                    source: e.v,
                    sink: e.u,
                    length: e.len,
                    capacity: e.cap,
                });
            }
        }
        let graph = Graph::new(
            self.nodes.iter().copied(),
            edges,
            self.depot,
            self.node_capacity,
        )?;
        let depot = graph.depot();

        let mut regular = Vec::new();
        let mut start = None;
        let mut end = None;
        for (id, rj) in self.jobs {
            let mut tasks = Vec::new();
            for (tid, rt) in rj.tasks {
                if !graph.contains(rt.location) {
                    return semantic(format!(
                        "task location {} not a node (job {id}, task {tid})",
                        rt.location
                    ));
                }
                let (lo, hi) = (rt.window.0, rt.window.1.unwrap_or(self.horizon));
                if lo < 0 {
                    return semantic(format!("negative window bound (job {id}, task {tid})"));
                }
                if lo > hi {
                    return semantic(format!("window lower bound above upper bound (job {id}, task {tid})"));
                }
                let mut preds = rt.precedes.clone();
                preds.sort();
                preds.dedup();
                tasks.push(Task {
                    id: tid,
                    location: rt.location,
                    window_lo: lo,
                    window_hi: hi,
                    predecessors: preds,
                });
            }
            if tasks.is_empty() {
                return semantic(format!("job {id} has no tasks"));
            }
            let mut eligible = rj.eligible.clone();
            eligible.sort();
            eligible.dedup();
            let job = Job {
                id: id.clone(),
                tasks,
                eligible,
            };
            match id.as_str() {
                START => start = Some(job),
                END => end = Some(job),
                _ => regular.push(job),
            }
        }

        for job in &regular {
            if job.eligible.is_empty() {
                return semantic(format!("job {} has no eligible vehicle", job.id));
            }
            if let Some(v) = job.eligible.iter().find(|v| !vehicles.contains(v)) {
                return semantic(format!("job {} lists unknown vehicle {v}", job.id));
            }
            let mut preds = Vec::new();
            for t in &job.tasks {
                let mut p = Vec::new();
                for name in &t.predecessors {
                    match job.task_index(name) {
                        Some(i) => p.push(i),
                        None => {
                            return semantic(format!(
                                "task {} of job {} has unknown predecessor {name}",
                                t.id, job.id
                            ))
                        }
                    }
                }
                preds.push(p);
            }
            if !acyclic(&preds) {
                return semantic(format!("precedence relation of job {} is cyclic", job.id));
            }
            if job.tasks.len() > 1 {
                let n = job.tasks.len();
                let has_delivery = (0..n).any(|k| transitive_preds(&preds, k).len() == n - 1);
                if !has_delivery {
                    return semantic(format!(
                        "job {} has no delivery task preceded by all its other tasks",
                        job.id
                    ));
                }
            }
        }

        let synthetic = |id: &str, given: Option<Job>| -> Result<Job, InstanceError> {
            let job = given.unwrap_or_else(|| Job {
                id: id.to_string(),
                tasks: vec![Task {
                    id: "0".into(),
                    location: depot,
                    window_lo: 0,
                    window_hi: self.horizon,
                    predecessors: vec![],
                }],
                eligible: vehicles.clone(),
            });
            let ok = job.tasks.len() == 1
                && job.tasks[0].location == depot
                && job.tasks[0].window_lo == 0
                && job.tasks[0].window_hi == self.horizon
                && job.tasks[0].predecessors.is_empty();
            if !ok {
                return semantic(format!(
                    "synthetic job {id} must have one task at the depot with window [0, horizon]"
                ));
            }
            Ok(Job {
                eligible: vehicles.clone(),
                ..job
            })
        };
        let mut jobs = vec![synthetic(START, start)?];
        jobs.extend(regular);
        jobs.push(synthetic(END, end)?);

        Ok(Instance {
            graph,
            jobs,
            fleet: Fleet {
                vehicles,
                operating_range: self.operating_range,
                charge_coeff: charge,
                discharge_coeff: discharge,
            },
            horizon: self.horizon,
        })
    }

    fn from_instance(inst: &Instance) -> RawInstance {
        let g = &inst.graph;
        let edges = g
            .edges()
            .iter()
            .map(|e| RawEdge {
                u: e.source,
                v: e.sink,
                len: e.length,
                cap: e.capacity,
                directed: true,
            })
            .collect();
        let jobs = inst
            .jobs
            .iter()
            .filter(|j| !j.is_synthetic())
            .map(|j| {
                let tasks = j
                    .tasks
                    .iter()
                    .map(|t| {
                        let hi = (t.window_hi != inst.horizon).then_some(t.window_hi);
                        (
                            t.id.clone(),
                            RawTask {
                                location: t.location,
                                window: (t.window_lo, hi),
                                precedes: t.predecessors.clone(),
                            },
                        )
                    })
                    .collect();
                (
                    j.id.clone(),
                    RawJob {
                        eligible: j.eligible.clone(),
                        tasks,
                    },
                )
            })
            .collect();
        RawInstance {
            nodes: g.nodes().to_vec(),
            depot: g.depot(),
            edges,
            horizon: inst.horizon,
            vehicles: inst.fleet.vehicles.clone(),
            operating_range: inst.fleet.operating_range,
            charge_coeff: rational_to_number(inst.fleet.charge_coeff),
            discharge_coeff: rational_to_number(inst.fleet.discharge_coeff),
            jobs,
            node_capacity: g.node_capacity_overrides().clone(),
        }
    }
}

/// The 21-node plant with four jobs used throughout the documentation.
pub fn example_plant() -> Instance {
    Instance::parse(EXAMPLE_PLANT).expect("bundled instance is valid")
}

pub const EXAMPLE_PLANT: &str = include_str!("../data/plant21.json");
