use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use comsat::assign::Assignment;
use comsat::bench::{bench, write_csv};
use comsat::generate::{generate, GenParams};
use comsat::schedule::Schedule;
use comsat::validate::validate;
use comsat::{solve, Instance, SolveStatus, SolverConfig};

#[derive(Parser)]
#[command(name = "comsat", version, about = "Conflict-free electric vehicle routing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolverArgs {
    /// candidate paths per pair of task locations
    #[arg(long, default_value_t = 10)]
    max_paths: usize,
    /// route sets tried per path combination
    #[arg(long, default_value_t = 10)]
    max_route_iters: usize,
    /// total time limit in seconds
    #[arg(long, default_value_t = 300.0)]
    timeout: f64,
    /// time limit per stage call in seconds
    #[arg(long, default_value_t = 60.0)]
    stage_timeout: f64,
    /// schedule every edge as if its capacity were 1
    #[arg(long)]
    strict_pairwise_edges: bool,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig> {
        let secs = |s: f64| Duration::try_from_secs_f64(s).context("invalid timeout");
        Ok(SolverConfig {
            max_paths: self.max_paths,
            max_route_iters: self.max_route_iters,
            stage_timeout: Some(secs(self.stage_timeout)?),
            total_timeout: Some(secs(self.timeout)?),
            strict_pairwise_edges: self.strict_pairwise_edges,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// schedule JSON written when the instance is solved
        #[arg(long)]
        output: PathBuf,
        /// assignment JSON written when the instance is solved
        #[arg(long)]
        assignment: Option<PathBuf>,
        /// solver statistics JSON
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Generate a random instance
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        vehicles: usize,
        #[arg(long)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        edge_reduction: u32,
        #[arg(long)]
        horizon: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a schedule against an instance
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Solve a grid of generated instances and write a CSV
    Bench {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    Instance::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve {
            instance,
            solver,
            output,
            assignment,
            stats,
        } => {
            let inst = load_instance(&instance)?;
            let result = solve(&inst, &solver.config()?)?;
            if let Some(path) = stats {
                write(&path, &serde_json::to_string_pretty(&result.stats)?)?;
            }
            println!("{}", result.status);
            if let (Some(s), Some(a)) = (&result.schedule, &result.assignment) {
                write(&output, &s.to_json())?;
                if let Some(path) = assignment {
                    write(&path, &a.to_json())?;
                }
            }
            Ok(match result.status {
                SolveStatus::Sat => 0,
                SolveStatus::Unsat => 1,
                SolveStatus::Unknown => 2,
            })
        }
        Command::Gen {
            nodes,
            vehicles,
            jobs,
            edge_reduction,
            horizon,
            seed,
            output,
        } => {
            let inst = generate(&GenParams {
                nodes,
                vehicles,
                jobs,
                edge_reduction,
                horizon,
                seed,
            })?;
            write(&output, &inst.to_json())?;
            Ok(0)
        }
        Command::Validate {
            instance,
            schedule,
            assignment,
        } => {
            let inst = load_instance(&instance)?;
            let sched = Schedule::from_json(&read(&schedule)?).context("parsing schedule")?;
            let asg = Assignment::from_json(&read(&assignment)?).context("parsing assignment")?;
            let report = validate(&inst, &sched, &asg)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::Bench { grid, out, solver } => {
            let grid: Vec<GenParams> =
                serde_json::from_str(&read(&grid)?).context("parsing grid")?;
            let (rows, summary) = bench(&grid, &solver.config()?);
            let file = fs::File::create(&out).with_context(|| format!("writing {}", out.display()))?;
            write_csv(file, &rows, &summary)?;
            for s in &summary {
                println!(
                    "{}: feas {} unfeas {} unknown {} errors {} avg {:.3}s",
                    s.class, s.feas, s.unfeas, s.unknown, s.errors, s.avg_secs
                );
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
