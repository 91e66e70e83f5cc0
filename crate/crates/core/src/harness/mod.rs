//! End-to-end MGA runs: base solve, proposals, parallel solves, archive,
//! volume tracking and convergence, plus merging, sweeps and audits.

mod audit;
mod config;
mod report;
mod run;
mod sweep;

pub use audit::{audit_dispatch, AuditRow};
pub use config::{ConvergenceConfig, ExperimentConfig, MethodConfig, DEFAULT_DEDUP_TOL};
pub use report::{merge_reports, new_solution_efficiency, IterationRow, RunReport, Summary};
pub use run::{run, run_detailed, run_with_seed, RunOutput};
pub use sweep::{sweep, SweepRow};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::lp::{LpError, Status};
use crate::methods::MethodError;
use crate::testbeds::TestbedError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("incompatible: {0}")]
    Incompatible(String),
    #[error("base problem is {0:?}")]
    BaseNotOptimal(Status),
    #[error("iteration {iteration} failed with objective {weights:?}: {source}")]
    Solve {
        iteration: usize,
        weights: Vec<f64>,
        source: LpError,
    },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Method(#[from] MethodError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Testbed(#[from] TestbedError),
}
