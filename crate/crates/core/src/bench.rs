//! Benchmark sweeps over generated instances with per-class aggregates.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generate::{generate, GenParams};
use crate::solve::{solve, SolveStatus, SolverConfig};

/// One solved (or failed) instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub params: GenParams,
    /// `None` when generation or solving failed
    pub status: Option<SolveStatus>,
    pub path_secs: f64,
    pub route_secs: f64,
    pub assign_secs: f64,
    pub schedule_secs: f64,
    pub total_secs: f64,
    pub pathfinder_calls: usize,
    pub router_calls: usize,
    pub error: Option<String>,
}

/// Counts and mean times of one parameter class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub class: String,
    pub feas: usize,
    pub unfeas: usize,
    pub unknown: usize,
    pub errors: usize,
    pub avg_secs: f64,
    pub avg_sat_secs: Option<f64>,
    pub avg_unsat_secs: Option<f64>,
    pub median_sat_secs: Option<f64>,
}

pub fn run_instance(p: &GenParams, cfg: &SolverConfig) -> BenchRow {
    let clock = Instant::now();
    let failed = |e: String| BenchRow {
        params: *p,
        status: None,
        path_secs: 0.0,
        route_secs: 0.0,
        assign_secs: 0.0,
        schedule_secs: 0.0,
        total_secs: clock.elapsed().as_secs_f64(),
        pathfinder_calls: 0,
        router_calls: 0,
        error: Some(e),
    };
    let inst = match generate(p) {
        Ok(i) => i,
        Err(e) => return failed(e.to_string()),
    };
    match solve(&inst, cfg) {
        Ok(r) => BenchRow {
            params: *p,
            status: Some(r.status),
            path_secs: r.stats.path_secs,
            route_secs: r.stats.route_secs,
            assign_secs: r.stats.assign_secs,
            schedule_secs: r.stats.schedule_secs,
            total_secs: r.stats.total_secs,
            pathfinder_calls: r.stats.pathfinder_calls,
            router_calls: r.stats.router_calls,
            error: None,
        },
        Err(e) => failed(e.to_string()),
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

/// Aggregates rows per class, classes in order of first appearance.
pub fn summarize(rows: &[BenchRow]) -> Vec<ClassSummary> {
    let mut classes: Vec<String> = Vec::new();
    for r in rows {
        let c = r.params.class();
        if !classes.contains(&c) {
            classes.push(c);
        }
    }
    classes
        .into_iter()
        .map(|class| {
            let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.params.class() == class).collect();
            let times = |s: SolveStatus| -> Vec<f64> {
                mine.iter()
                    .filter(|r| r.status == Some(s))
                    .map(|r| r.total_secs)
                    .collect()
            };
            let sat = times(SolveStatus::Sat);
            let unsat = times(SolveStatus::Unsat);
            let all: Vec<f64> = mine.iter().map(|r| r.total_secs).collect();
            ClassSummary {
                feas: sat.len(),
                unfeas: unsat.len(),
                unknown: times(SolveStatus::Unknown).len(),
                errors: mine.iter().filter(|r| r.status.is_none()).count(),
                avg_secs: mean(&all).unwrap_or(0.0),
                avg_sat_secs: mean(&sat),
                avg_unsat_secs: mean(&unsat),
                median_sat_secs: median(&sat),
                class,
            }
        })
        .collect()
}

/// Solves every grid point, in parallel; failures become rows with an error.
pub fn bench(grid: &[GenParams], cfg: &SolverConfig) -> (Vec<BenchRow>, Vec<ClassSummary>) {
    let rows: Vec<BenchRow> = grid.par_iter().map(|p| run_instance(p, cfg)).collect();
    let summary = summarize(&rows);
    (rows, summary)
}

const HEADER: [&str; 23] = [
    "kind", "class", "nodes", "vehicles", "jobs", "edge_reduction", "horizon", "seed", "status",
    "path_secs", "route_secs", "assign_secs", "schedule_secs", "total_secs", "pathfinder_calls",
    "router_calls", "feas", "unfeas", "unknown", "errors", "avg_secs", "avg_sat_secs", "error",
];

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.4}")).unwrap_or_default()
}

/// Instance rows followed by one aggregate row per class.
pub fn write_csv(out: impl Write, rows: &[BenchRow], summary: &[ClassSummary]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        let p = &r.params;
        w.write_record([
            "instance".to_string(),
            p.class(),
            p.nodes.to_string(),
            p.vehicles.to_string(),
            p.jobs.to_string(),
            p.edge_reduction.to_string(),
            p.horizon.to_string(),
            p.seed.to_string(),
            r.status.map(|s| s.to_string()).unwrap_or_else(|| "error".into()),
            format!("{:.4}", r.path_secs),
            format!("{:.4}", r.route_secs),
            format!("{:.4}", r.assign_secs),
            format!("{:.4}", r.schedule_secs),
            format!("{:.4}", r.total_secs),
            r.pathfinder_calls.to_string(),
            r.router_calls.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    for s in summary {
        let mut rec = vec!["aggregate".to_string(), s.class.clone()];
        rec.extend(std::iter::repeat_n(String::new(), 11));
        rec.push(format!("{:.4}", s.avg_secs));
        rec.extend([String::new(), String::new()]);
        rec.extend([
            s.feas.to_string(),
            s.unfeas.to_string(),
            s.unknown.to_string(),
            s.errors.to_string(),
            format!("{:.4}", s.avg_secs),
            opt(s.avg_sat_secs),
            String::new(),
        ]);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
