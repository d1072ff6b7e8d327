//! Vehicle-to-route matching: a job shop where routes are jobs and vehicles
//! are machines, with eligibility, latest starts and recharge gaps.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::backend::{BoolVar, Context, IntVar, Lit, Outcome};
use crate::instance::{Instance, Time};
use crate::router::RouteSet;
use crate::{Error, StageResult};

/// Route data the matching needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteMeta {
    /// vehicles eligible for every job of the route
    pub eligible: Vec<String>,
    pub length: i64,
    pub latest_start: Time,
}

impl RouteMeta {
    pub fn of(inst: &Instance, routes: &RouteSet) -> Vec<RouteMeta> {
        routes
            .routes
            .iter()
            .map(|r| {
                let mut eligible: BTreeSet<&String> = inst.fleet.vehicles.iter().collect();
                for &j in &r.jobs {
                    let vj: BTreeSet<&String> = inst.jobs[j].eligible.iter().collect();
                    eligible = eligible.intersection(&vj).copied().collect();
                }
                RouteMeta {
                    eligible: eligible.into_iter().cloned().collect(),
                    length: r.length,
                    latest_start: r.latest_start,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteAssignment {
    pub route: usize,
    pub vehicle: String,
    pub start: Time,
    pub end: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub assignments: Vec<RouteAssignment>,
}

impl Assignment {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Assignment, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn for_route(&self, route: usize) -> Option<&RouteAssignment> {
        self.assignments.iter().find(|a| a.route == route)
    }
}

/// Matches vehicles to `routes`.
pub fn assign(
    inst: &Instance,
    routes: &RouteSet,
    deadline: Option<Instant>,
) -> Result<StageResult<Assignment>, Error> {
    let metas = RouteMeta::of(inst, routes);
    if metas.iter().any(|m| m.eligible.is_empty() || m.latest_start < 0) {
        return Ok(StageResult::Infeasible);
    }
    let vehicles = &inst.fleet.vehicles;
    let mut ctx = Context::new();
    let mut allo: Vec<Vec<BoolVar>> = Vec::new();
    let mut start: Vec<IntVar> = Vec::new();
    let mut end: Vec<IntVar> = Vec::new();
    for (r, m) in metas.iter().enumerate() {
        let s = ctx.new_int(format!("start_{r}"), 0, Some(m.latest_start));
        let e = ctx.new_int(format!("end_{r}"), m.length, None);
        let lo = ctx.diff_ge(e, s, m.length);
        let hi = ctx.diff_le(e, s, m.length);
        ctx.assert_lit(lo);
        ctx.assert_lit(hi);
        let vs: Vec<BoolVar> = vehicles
            .iter()
            .map(|v| ctx.new_bool(format!("allo_{v}_{r}")))
            .collect();
        let lits: Vec<Lit> = vs.iter().map(|&v| v.into()).collect();
        ctx.assert(Context::exactly_one(&lits)?);
        let eligible: Vec<Lit> = vehicles
            .iter()
            .zip(&vs)
            .filter(|(name, _)| m.eligible.contains(name))
            .map(|(_, &v)| v.into())
            .collect();
        ctx.assert(Context::clause(eligible));
        start.push(s);
        end.push(e);
        allo.push(vs);
    }
    for r in 0..metas.len() {
        for q in (r + 1)..metas.len() {
            // r after q, or q after r, with the recharge gap of the later route
            let r_after = ctx.diff_ge(start[r], end[q], inst.charge_time(metas[r].length));
            let q_after = ctx.diff_ge(start[q], end[r], inst.charge_time(metas[q].length));
            for (&vr, &vq) in allo[r].iter().zip(&allo[q]) {
                ctx.assert(Context::clause([!Lit::from(vr), !Lit::from(vq), r_after, q_after]));
            }
        }
    }
    ctx.set_deadline(deadline);
    match ctx.check() {
        Outcome::Sat(model) => {
            let assignments = (0..metas.len())
                .map(|r| {
                    let i = allo[r]
                        .iter()
                        .position(|&v| model.bool(v))
                        .expect("one vehicle per route");
                    RouteAssignment {
                        route: r,
                        vehicle: vehicles[i].clone(),
                        start: model.int(start[r]),
                        end: model.int(end[r]),
                    }
                })
                .collect();
            Ok(StageResult::Feasible(Assignment { assignments }))
        }
        Outcome::Unsat => Ok(StageResult::Infeasible),
        Outcome::Timeout => Ok(StageResult::Timeout),
    }
}
