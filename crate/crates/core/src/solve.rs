//! The decomposition loop: path combination, routes, assignment, schedule,
//! backtracking to the router when a later stage fails.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::assign::{assign, Assignment};
use crate::instance::Instance;
use crate::paths::{PathFinder, PathTable};
use crate::router::{RouteSet, RouterSession};
use crate::schedule::{expand_routes, scheduler, Schedule};
use crate::validate::validate;
use crate::{Error, StageResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// candidate paths per pair of task locations
    pub max_paths: usize,
    /// route sets tried per path combination
    pub max_route_iters: usize,
    pub stage_timeout: Option<Duration>,
    pub total_timeout: Option<Duration>,
    /// treat every edge as capacity 1 when scheduling
    pub strict_pairwise_edges: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_paths: 10,
            max_route_iters: 10,
            stage_timeout: Some(Duration::from_secs(60)),
            total_timeout: Some(Duration::from_secs(300)),
            strict_pairwise_edges: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Sat,
    Unsat,
    Unknown,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Sat => "sat",
            SolveStatus::Unsat => "unsat",
            SolveStatus::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub pathfinder_calls: usize,
    pub router_calls: usize,
    pub assign_calls: usize,
    pub scheduler_calls: usize,
    /// router calls for the last path combination
    pub route_iters: usize,
    pub relaxation_calls: usize,
    pub path_secs: f64,
    pub route_secs: f64,
    pub assign_secs: f64,
    pub schedule_secs: f64,
    pub total_secs: f64,
    pub reason: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub schedule: Option<Schedule>,
    pub assignment: Option<Assignment>,
    pub routes: Option<RouteSet>,
    pub stats: SolveStats,
}

struct Clock {
    start: Instant,
    total: Option<Instant>,
    stage: Option<Duration>,
}

impl Clock {
    fn deadline(&self) -> Option<Instant> {
        let stage = self.stage.map(|d| Instant::now() + d);
        match (stage, self.total) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn expired(&self) -> bool {
        self.total.is_some_and(|t| Instant::now() >= t)
    }
}

fn timed<T>(acc: &mut f64, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    *acc += t.elapsed().as_secs_f64();
    out
}

/// Solves `inst`. `Sat` results carry a schedule that passed [`validate`].
pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<SolveResult, Error> {
    if cfg.max_paths == 0 || cfg.max_route_iters == 0 {
        return Err(Error::Invalid("max_paths and max_route_iters must be positive".into()));
    }
    let clock = Clock {
        start: Instant::now(),
        total: cfg.total_timeout.map(|d| Instant::now() + d),
        stage: cfg.stage_timeout,
    };
    let mut stats = SolveStats::default();
    let finish = |status, stats: SolveStats, reason: &str| {
        let mut stats = stats;
        stats.total_secs = clock.start.elapsed().as_secs_f64();
        stats.reason = Some(reason.to_string());
        Ok(SolveResult {
            status,
            schedule: None,
            assignment: None,
            routes: None,
            stats,
        })
    };

    let table = timed(&mut stats.path_secs, || PathTable::enumerate(inst, cfg.max_paths));
    let shortest = table.shortest_combination_if_complete();
    let mut finder = PathFinder::new(table);
    // whether routing fails even on the shortest paths
    let mut relaxation_unsat: Option<bool> = None;

    loop {
        if clock.expired() {
            return finish(SolveStatus::Unknown, stats, "total timeout");
        }
        stats.pathfinder_calls += 1;
        let comb = match timed(&mut stats.path_secs, || finder.next(clock.deadline())) {
            StageResult::Feasible(c) => c,
            StageResult::Infeasible => {
                let status = if shortest.is_none() {
                    SolveStatus::Unsat
                } else {
                    SolveStatus::Unknown
                };
                return finish(status, stats, "path combinations exhausted");
            }
            StageResult::Timeout => return finish(SolveStatus::Unknown, stats, "path finder timeout"),
        };
        let mut session = RouterSession::new(inst, &comb);
        let mut found = 0;
        let mut assigned = false;
        stats.route_iters = 0;
        while found < cfg.max_route_iters {
            stats.router_calls += 1;
            stats.route_iters += 1;
            let routes = match timed(&mut stats.route_secs, || session.next(clock.deadline()))? {
                StageResult::Feasible(r) => r,
                StageResult::Timeout => return finish(SolveStatus::Unknown, stats, "router timeout"),
                StageResult::Infeasible => {
                    if found == 0 {
                        let shortest = shortest.as_ref().expect("a combination was found");
                        let unsat = match relaxation_unsat {
                            Some(u) => u,
                            None if comb.selection == shortest.selection => true,
                            None => {
                                stats.relaxation_calls += 1;
                                let mut relaxed = RouterSession::new(inst, shortest);
                                match timed(&mut stats.route_secs, || relaxed.next(clock.deadline()))? {
                                    StageResult::Infeasible => true,
                                    StageResult::Feasible(_) => false,
                                    StageResult::Timeout => {
                                        return finish(SolveStatus::Unknown, stats, "router timeout")
                                    }
                                }
                            }
                        };
                        relaxation_unsat = Some(unsat);
                        if unsat {
                            return finish(SolveStatus::Unsat, stats, "no routes on the shortest paths");
                        }
                    }
                    // Longer paths only tighten routing and assignment, so once
                    // every route set failed before scheduling, combinations
                    // with no shorter path anywhere fail too.
                    if !assigned {
                        finder.block_dominated(&comb);
                    }
                    break;
                }
            };
            found += 1;

            stats.assign_calls += 1;
            let asg = match timed(&mut stats.assign_secs, || assign(inst, &routes, clock.deadline()))? {
                StageResult::Feasible(a) => a,
                StageResult::Infeasible => continue,
                StageResult::Timeout => return finish(SolveStatus::Unknown, stats, "assignment timeout"),
            };
            assigned = true;
            let traces = expand_routes(inst, &routes, &comb, &asg)?;
            stats.scheduler_calls += 1;
            let sched = match timed(&mut stats.schedule_secs, || {
                scheduler(inst, &traces, cfg.strict_pairwise_edges, clock.deadline())
            })? {
                StageResult::Feasible(s) => s,
                StageResult::Infeasible => continue,
                StageResult::Timeout => return finish(SolveStatus::Unknown, stats, "scheduler timeout"),
            };

            let report = validate(inst, &sched, &asg)?;
            if !report.ok {
                return Err(Error::Invalid(format!(
                    "schedule failed validation: {:?}",
                    report.violations
                )));
            }
            stats.total_secs = clock.start.elapsed().as_secs_f64();
            return Ok(SolveResult {
                status: SolveStatus::Sat,
                schedule: Some(sched),
                assignment: Some(asg),
                routes: Some(routes),
                stats,
            });
        }
    }
}
