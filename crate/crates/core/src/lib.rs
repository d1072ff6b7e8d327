//! Compositional solver for the electric conflict-free vehicle routing problem.
//!
//! The problem is split into four stages solved in turn, with backtracking:
//!
//! 1. [`paths`]: pick one candidate path for every pair of task locations;
//! 2. [`router`]: build depot-to-depot routes that meet time windows and range;
//! 3. [`assign`]: match vehicles to routes under eligibility and recharge gaps;
//! 4. [`schedule`]: time every node and edge visit so that capacities hold.
//!
//! [`solve::solve`] drives the loop. [`validate`] checks schedules independently
//! and [`oracle`] decides tiny instances by exhaustive search.

pub mod assign;
pub mod backend;
pub mod bench;
pub mod generate;
pub mod instance;
pub mod oracle;
pub mod paths;
pub mod router;
pub mod schedule;
pub mod solve;
pub mod validate;

use thiserror::Error;

pub use instance::{Instance, InstanceError};
pub use solve::{solve, SolveResult, SolveStatus, SolverConfig};

/// Outcome of one stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageResult<T> {
    Feasible(T),
    Infeasible,
    /// deadline hit before the stage finished
    Timeout,
}

impl<T> StageResult<T> {
    pub fn feasible(self) -> Option<T> {
        match self {
            StageResult::Feasible(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, StageResult::Feasible(_))
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Backend(#[from] backend::BackendError),
    #[error("model extraction failed: {0}")]
    Extraction(String),
    #[error("{0}")]
    Invalid(String),
}
