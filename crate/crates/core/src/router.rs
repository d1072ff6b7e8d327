//! Routing over the selected paths: depot-to-depot routes covering every task
//! within its window and the vehicle range, using as few routes as possible.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::backend::{BoolVar, Context, IntVar, LinExpr, Lit, Model, Outcome};
use crate::instance::{Instance, TaskRef, Time};
use crate::paths::PathCombination;
use crate::{Error, StageResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Visit {
    pub task: TaskRef,
    pub arrival: Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    /// start visit, regular visits, end visit
    pub visits: Vec<Visit>,
    pub length: i64,
    pub latest_start: Time,
    /// regular jobs served, in visiting order
    pub jobs: Vec<usize>,
}

impl Route {
    /// Task references in visiting order, synthetic ones included.
    pub fn tasks(&self) -> impl Iterator<Item = TaskRef> + '_ {
        self.visits.iter().map(|v| v.task)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteSet {
    pub routes: Vec<Route>,
    /// arcs set in the model that produced this set
    pub arcs: Vec<(TaskRef, TaskRef)>,
}

pub type PreviousRoutes = Vec<RouteSet>;

#[derive(Serialize, Deserialize)]
struct RawVisit {
    job: String,
    task: String,
    arrival: Time,
}

#[derive(Serialize, Deserialize)]
struct RawRoute {
    visits: Vec<RawVisit>,
    length: i64,
    latest_start: Time,
}

#[derive(Serialize, Deserialize)]
struct RawRouteSet {
    routes: Vec<RawRoute>,
}

impl RouteSet {
    pub fn to_json(&self, inst: &Instance) -> String {
        let raw = RawRouteSet {
            routes: self
                .routes
                .iter()
                .map(|r| RawRoute {
                    visits: r
                        .visits
                        .iter()
                        .map(|v| RawVisit {
                            job: inst.jobs[v.task.job].id.clone(),
                            task: inst.task(v.task).id.clone(),
                            arrival: v.arrival,
                        })
                        .collect(),
                    length: r.length,
                    latest_start: r.latest_start,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    pub fn vehicle_count(&self) -> usize {
        self.routes.len()
    }
}

/// Distance between two tasks under the selected paths.
pub fn task_distance(inst: &Instance, paths: &PathCombination, a: TaskRef, b: TaskRef) -> i64 {
    paths.distance(inst.task(a).location, inst.task(b).location)
}

/// Every topological order of the tasks of one job.
fn topological_orders(preds: &[Vec<usize>]) -> Vec<Vec<usize>> {
    fn extend(preds: &[Vec<usize>], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = preds.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..n {
            if !prefix.contains(&k) && preds[k].iter().all(|p| prefix.contains(p)) {
                prefix.push(k);
                extend(preds, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(preds, &mut Vec::new(), &mut out);
    out
}

/// Jobs with at most this many tasks get an explicit disjunction over orders.
const MAX_ENUMERATED_TASKS: usize = 4;

/// A routing model for one path combination; successive calls enumerate
/// distinct route sets.
pub struct RouterSession<'a> {
    inst: &'a Instance,
    paths: &'a PathCombination,
    ctx: Context,
    tasks: Vec<TaskRef>,
    arcs: BTreeMap<(TaskRef, TaskRef), BoolVar>,
    cs: BTreeMap<TaskRef, IntVar>,
    calls: usize,
}

impl<'a> RouterSession<'a> {
    pub fn new(inst: &'a Instance, paths: &'a PathCombination) -> Self {
        let mut ctx = Context::new();
        let tasks = inst.task_refs();
        let start = inst.start_task();
        let end = inst.end_task();
        let horizon = inst.horizon;
        let depot = inst.graph.depot();
        let dist = |a: TaskRef, b: TaskRef| task_distance(inst, paths, a, b);
        let regular: Vec<TaskRef> = tasks
            .iter()
            .copied()
            .filter(|t| *t != start && *t != end)
            .collect();

        // arrival time, remaining charge (scaled by the discharge denominator)
        // and position along the route
        let discharge = inst.fleet.discharge_coeff;
        let rc_scale = *discharge.denom();
        let rc_step = *discharge.numer();
        let full = inst.fleet.operating_range * rc_scale;
        let mut cs = BTreeMap::new();
        let mut rc = BTreeMap::new();
        let mut pos = BTreeMap::new();
        for &t in &tasks {
            let task = inst.task(t);
            let name = format!("{}.{}", inst.jobs[t.job].id, task.id);
            let lo = task.window_lo.max(paths.distance(depot, task.location));
            let hi = task.window_hi.min(horizon);
            cs.insert(t, ctx.new_int(format!("cs_{name}"), lo, Some(hi)));
            let rc_lo = if t == start { full } else { 0 };
            rc.insert(t, ctx.new_int(format!("rc_{name}"), rc_lo, Some(full)));
            if t != start && t != end {
                pos.insert(t, ctx.new_int(format!("pos_{name}"), 1, Some(regular.len() as i64)));
            }
        }

        let earliest = |t: TaskRef| inst.task(t).window_lo.max(paths.distance(depot, inst.task(t).location));
        let mut arcs = BTreeMap::new();
        for &a in &tasks {
            for &b in &tasks {
                if a == b || b == start || a == end || (a == start && b == end) {
                    continue;
                }
                let d = dist(a, b);
                let v = ctx.new_bool(format!(
                    "dir_{}.{}_{}.{}",
                    inst.jobs[a.job].id,
                    inst.task(a).id,
                    inst.jobs[b.job].id,
                    inst.task(b).id
                ));
                arcs.insert((a, b), v);
                let l = Lit::from(v);
                // arcs that can never meet the window of `b`
                if earliest(a) + d > inst.task(b).window_hi.min(horizon) {
                    ctx.assert_lit(!l);
                    continue;
                }
                let time = ctx.diff_ge(cs[&b], cs[&a], d);
                ctx.assert_implies(l, time);
                let charge = ctx.diff_le(rc[&b], rc[&a], -rc_step * d);
                ctx.assert_implies(l, charge);
                if let (Some(&pa), Some(&pb)) = (pos.get(&a), pos.get(&b)) {
                    let order = ctx.diff_ge(pb, pa, 1);
                    ctx.assert_implies(l, order);
                }
            }
        }

        let out_of = |a: TaskRef| -> Vec<Lit> {
            arcs.iter()
                .filter(|((x, _), _)| *x == a)
                .map(|(_, &v)| Lit::from(v))
                .collect()
        };
        let into = |b: TaskRef| -> Vec<Lit> {
            arcs.iter()
                .filter(|((_, y), _)| *y == b)
                .map(|(_, &v)| Lit::from(v))
                .collect()
        };

        // every regular task is left and entered exactly once
        for &t in &regular {
            for lits in [out_of(t), into(t)] {
                match Context::exactly_one(&lits) {
                    Ok(c) => ctx.assert(c),
                    Err(_) => {
                        let f = !ctx.true_lit();
                        ctx.assert_lit(f);
                    }
                }
            }
        }
        // as many routes leave the start as reach the end
        let leave = out_of(start);
        let reach = into(end);
        for n in 1..=inst.num_regular_jobs() {
            let a = ctx.card_eq(&leave, n);
            let b = ctx.card_eq(&reach, n);
            ctx.assert_implies(a, b);
        }
        if regular.is_empty() {
            for l in leave {
                ctx.assert_lit(!l);
            }
        }

        for j in inst.regular_jobs() {
            let job = &inst.jobs[j];
            let m = job.tasks.len();
            let preds: Vec<Vec<usize>> = (0..m).map(|k| job.predecessor_indices(k)).collect();
            let tref = |k: usize| TaskRef { job: j, task: k };
            // tasks of a job are visited back to back
            if m > 1 && m <= MAX_ENUMERATED_TASKS {
                let mut options = Vec::new();
                for order in topological_orders(&preds) {
                    let o = Lit::from(ctx.new_bool(format!("ord_{}_{:?}", job.id, order)));
                    for w in order.windows(2) {
                        let arc = Lit::from(arcs[&(tref(w[0]), tref(w[1]))]);
                        ctx.assert_implies(o, arc);
                    }
                    options.push(o);
                }
                ctx.assert(Context::clause(options));
            } else if m > 1 {
                let internal: Vec<Lit> = arcs
                    .iter()
                    .filter(|((a, b), _)| a.job == j && b.job == j)
                    .map(|(_, &v)| Lit::from(v))
                    .collect();
                ctx.assert(Context::exactly_n(&internal, m - 1).expect("enough internal arcs"));
            }
            // pickups before the delivery, in time and in route order
            for k in 0..m {
                for &p in &preds[k] {
                    let time = ctx.diff_ge(cs[&tref(k)], cs[&tref(p)], 0);
                    ctx.assert_lit(time);
                    let order = ctx.diff_ge(pos[&tref(k)], pos[&tref(p)], 1);
                    ctx.assert_lit(order);
                }
            }
        }

        let objective: LinExpr = out_of(start).into_iter().map(LinExpr::lit).sum();
        ctx.minimize(objective);
        for (&(a, b), &v) in &arcs {
            // start from one route per job
            let hint = a.job != b.job && (a == start || b == end) || a.job == b.job && a.task < b.task;
            ctx.set_phase(v, hint);
        }

        RouterSession {
            inst,
            paths,
            ctx,
            tasks,
            arcs,
            cs,
            calls: 0,
        }
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    /// Excludes the arc assignment of `set`.
    pub fn block(&mut self, set: &RouteSet) {
        let clause: Vec<Lit> = set
            .arcs
            .iter()
            .filter_map(|arc| self.arcs.get(arc))
            .map(|&v| !Lit::from(v))
            .collect();
        self.ctx.assert(Context::clause(clause));
    }

    /// The best route set not returned before; the result is blocked for later calls.
    pub fn next(&mut self, deadline: Option<Instant>) -> Result<StageResult<RouteSet>, Error> {
        self.calls += 1;
        self.ctx.set_deadline(deadline);
        match self.ctx.check_minimize()? {
            Outcome::Sat(model) => {
                self.ctx.set_objective_floor(model.objective);
                let set = self.extract(&model)?;
                self.block(&set);
                Ok(StageResult::Feasible(set))
            }
            Outcome::Unsat => Ok(StageResult::Infeasible),
            Outcome::Timeout => Ok(StageResult::Timeout),
        }
    }

    fn extract(&self, model: &Model) -> Result<RouteSet, Error> {
        let inst = self.inst;
        let start = inst.start_task();
        let end = inst.end_task();
        let arcs: Vec<(TaskRef, TaskRef)> = self
            .arcs
            .iter()
            .filter(|(_, &v)| model.bool(v))
            .map(|(&arc, _)| arc)
            .collect();
        let mut succ: BTreeMap<TaskRef, TaskRef> = BTreeMap::new();
        let mut firsts = Vec::new();
        for &(a, b) in &arcs {
            if a == start {
                firsts.push(b);
            } else if succ.insert(a, b).is_some() {
                return Err(Error::Extraction(format!("task {a:?} has two successors")));
            }
        }
        let mut seen = BTreeSet::new();
        let mut routes = Vec::new();
        for first in firsts {
            let mut visits = vec![Visit {
                task: start,
                arrival: model.int(self.cs[&start]),
            }];
            let mut cur = first;
            loop {
                if !seen.insert(cur) && cur != end {
                    return Err(Error::Extraction(format!("task {cur:?} visited twice")));
                }
                visits.push(Visit {
                    task: cur,
                    arrival: model.int(self.cs[&cur]),
                });
                if cur == end {
                    break;
                }
                cur = *succ
                    .get(&cur)
                    .ok_or_else(|| Error::Extraction(format!("task {cur:?} has no successor")))?;
            }
            routes.push(build_route(inst, self.paths, visits));
        }
        let missing: Vec<TaskRef> = self
            .tasks
            .iter()
            .copied()
            .filter(|t| *t != start && *t != end && !seen.contains(t))
            .collect();
        if !missing.is_empty() {
            return Err(Error::Extraction(format!(
                "tasks {missing:?} lie on a cycle detached from the depot"
            )));
        }
        Ok(RouteSet { routes, arcs })
    }
}

/// Fills length, latest start and job list for a visit sequence.
pub fn build_route(inst: &Instance, paths: &PathCombination, visits: Vec<Visit>) -> Route {
    let mut length = 0;
    let mut latest_start = Time::MAX;
    let mut jobs = Vec::new();
    for (i, v) in visits.iter().enumerate() {
        if i > 0 {
            length += task_distance(inst, paths, visits[i - 1].task, v.task);
        }
        let deadline = inst.task(v.task).window_hi.min(inst.horizon);
        latest_start = latest_start.min(deadline - length);
        let j = v.task.job;
        if !inst.jobs[j].is_synthetic() && !jobs.contains(&j) {
            jobs.push(j);
        }
    }
    Route {
        visits,
        length,
        latest_start,
        jobs,
    }
}

/// One-shot routing: the best route set for `paths` not in `prev`.
pub fn router(
    inst: &Instance,
    paths: &PathCombination,
    prev: &PreviousRoutes,
) -> Result<StageResult<RouteSet>, Error> {
    let mut session = RouterSession::new(inst, paths);
    for set in prev {
        session.block(set);
    }
    session.next(None)
}
