//! Problems to run the methods on, plus a brute-force vertex oracle.

mod cem;
mod random_lp;
mod reference;
mod vertices;

pub use cem::{AuditRecord, CapacityModel, CemSpec, MgaMode, Technology, TECHNOLOGIES};
pub use random_lp::random_lp;
pub use reference::reference_3d;
pub use vertices::{enumerate_vertices, MAX_ORACLE_ROWS, MAX_ORACLE_VARS};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{BudgetSpec, LinearProgram, LpError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TestbedError {
    #[error("random LP needs n >= 2, got {0}")]
    TooSmall(usize),
    #[error(
        "vertex oracle limited to {max_vars} variables and {max_rows} rows; got {vars} and {rows}"
    )]
    OracleSize {
        vars: usize,
        rows: usize,
        max_vars: usize,
        max_rows: usize,
    },
    #[error("invalid capacity model: {0}")]
    BadCem(String),
    #[error("demand {demand:.1} MWh in hour {hour} exceeds buildable supply {supply:.1} MWh")]
    DemandExceedsBuildable {
        hour: usize,
        demand: f64,
        supply: f64,
    },
    #[error("solution has {got} values, model has {expected}")]
    SolutionLength { expected: usize, got: usize },
    #[error("redispatch failed: {0}")]
    Redispatch(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Which problem to build. Serialized with a `kind` tag, e.g.
/// `{"kind": "random_lp", "n": 10, "seed": 7}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestbedSpec {
    Reference3d,
    RandomLp {
        n: usize,
        #[serde(default)]
        seed: u64,
    },
    ToyCem(CemSpec),
}

/// A built testbed: the LP, which variables MGA explores, and their names.
#[derive(Debug, Clone)]
pub struct Instance {
    pub lp: LinearProgram<f64>,
    pub mga_vars: Vec<usize>,
    pub labels: Vec<String>,
    pub model: Option<CapacityModel>,
}

impl TestbedSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TestbedSpec::Reference3d => "reference3d",
            TestbedSpec::RandomLp { .. } => "random_lp",
            TestbedSpec::ToyCem(_) => "toy_cem",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            TestbedSpec::Reference3d => 0,
            TestbedSpec::RandomLp { seed, .. } => *seed,
            TestbedSpec::ToyCem(c) => c.seed,
        }
    }

    /// The same testbed with its random seed replaced (no-op for the fixed
    /// reference problem).
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut out = self.clone();
        match &mut out {
            TestbedSpec::Reference3d => {}
            TestbedSpec::RandomLp { seed: s, .. } => *s = seed,
            TestbedSpec::ToyCem(c) => c.seed = seed,
        }
        out
    }

    /// Number of MGA variables the built instance will have.
    pub fn dimension(&self) -> usize {
        match self {
            TestbedSpec::Reference3d => 3,
            TestbedSpec::RandomLp { n, .. } => *n,
            TestbedSpec::ToyCem(c) => c.mga_dimension(),
        }
    }

    /// Slack used when a config does not give one: absolute 3 for the
    /// reference problem, 10% otherwise.
    pub fn default_budget(&self) -> BudgetSpec {
        match self {
            TestbedSpec::Reference3d => BudgetSpec::absolute(3.0),
            _ => BudgetSpec::relative(0.1),
        }
    }

    pub fn build(&self) -> Result<Instance, TestbedError> {
        match self {
            TestbedSpec::Reference3d => Ok(Instance {
                lp: reference_3d(),
                mga_vars: vec![0, 1, 2],
                labels: vec!["x1".into(), "x2".into(), "x3".into()],
                model: None,
            }),
            TestbedSpec::RandomLp { n, seed } => Ok(Instance {
                lp: random_lp(*n, *seed)?,
                mga_vars: (0..*n).collect(),
                labels: (1..=*n).map(|k| format!("x{k}")).collect(),
                model: None,
            }),
            TestbedSpec::ToyCem(spec) => {
                let model = CapacityModel::new(spec)?;
                let mga_vars = model.select_mga_vars(spec.mode);
                let labels = mga_vars.iter().map(|&j| model.var_name(j)).collect();
                Ok(Instance {
                    lp: model.lp().clone(),
                    mga_vars,
                    labels,
                    model: Some(model),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests;
