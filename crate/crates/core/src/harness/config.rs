use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::geometry::{ConvergenceRule, DEFAULT_DIM_CAP};
use crate::lp::BudgetSpec;
use crate::methods::{Method, DEFAULT_ANGLE_TOL_DEG};
use crate::testbeds::TestbedSpec;

pub const DEFAULT_DEDUP_TOL: f64 = 1e-6;

/// Method choice plus its knobs, e.g. `{"name": "maa", "dim_cap": 12}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase", deny_unknown_fields)]
pub enum MethodConfig {
    Hsj,
    Random,
    #[serde(alias = "min-max")]
    MinMax,
    Maa {
        #[serde(default = "default_angle")]
        angle_tol_deg: f64,
        #[serde(default = "default_dim_cap")]
        dim_cap: usize,
        /// Random solves allowed while looking for a full-dimensional start.
        #[serde(default)]
        max_init_iters: Option<usize>,
    },
    #[serde(alias = "combo")]
    Hybrid {
        /// Replaces the default `±e_k` brackets when given.
        #[serde(default)]
        brackets: Option<Vec<Vec<f64>>>,
        /// Extra directions of interest, tried after the brackets.
        #[serde(default)]
        interest: Vec<Vec<f64>>,
    },
}

fn default_angle() -> f64 {
    DEFAULT_ANGLE_TOL_DEG
}

fn default_dim_cap() -> usize {
    DEFAULT_DIM_CAP
}

impl MethodConfig {
    pub fn method(&self) -> Method {
        match self {
            MethodConfig::Hsj => Method::Hsj,
            MethodConfig::Random => Method::Random,
            MethodConfig::MinMax => Method::MinMax,
            MethodConfig::Maa { .. } => Method::Maa,
            MethodConfig::Hybrid { .. } => Method::Hybrid,
        }
    }

    /// Default knobs for `method`.
    pub fn from_method(method: Method) -> Self {
        match method {
            Method::Hsj => MethodConfig::Hsj,
            Method::Random => MethodConfig::Random,
            Method::MinMax => MethodConfig::MinMax,
            Method::Maa => MethodConfig::Maa {
                angle_tol_deg: DEFAULT_ANGLE_TOL_DEG,
                dim_cap: DEFAULT_DIM_CAP,
                max_init_iters: None,
            },
            Method::Hybrid => MethodConfig::Hybrid {
                brackets: None,
                interest: Vec::new(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub enabled: bool,
    pub window: usize,
    pub rel_threshold: f64,
    pub floor_eps: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        let r = ConvergenceRule::default();
        ConvergenceConfig {
            enabled: false,
            window: r.window,
            rel_threshold: r.rel_threshold,
            floor_eps: r.floor_eps,
        }
    }
}

impl ConvergenceConfig {
    pub fn enabled() -> Self {
        ConvergenceConfig {
            enabled: true,
            ..Self::default()
        }
    }

    pub fn rule(&self) -> ConvergenceRule {
        ConvergenceRule {
            window: self.window,
            rel_threshold: self.rel_threshold,
            floor_eps: self.floor_eps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub testbed: TestbedSpec,
    pub method: MethodConfig,
    /// Falls back to the testbed's default slack.
    #[serde(default)]
    pub budget: Option<BudgetSpec>,
    pub iterations: usize,
    /// Method RNG seeds; `run` uses the first, `sweep` all of them.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_dedup")]
    pub dedup_tol: f64,
    #[serde(default)]
    pub convergence: ConvergenceConfig,
    /// Solves handed out per parallel batch; defaults to `4 * workers`.
    #[serde(default)]
    pub batch_size: Option<usize>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_workers() -> usize {
    1
}

fn default_dedup() -> f64 {
    DEFAULT_DEDUP_TOL
}

impl ExperimentConfig {
    pub fn new(testbed: TestbedSpec, method: Method, iterations: usize) -> Self {
        ExperimentConfig {
            testbed,
            method: MethodConfig::from_method(method),
            budget: None,
            iterations,
            seeds: default_seeds(),
            workers: 1,
            dedup_tol: DEFAULT_DEDUP_TOL,
            convergence: ConvergenceConfig::default(),
            batch_size: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seeds = vec![seed];
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_budget(mut self, budget: BudgetSpec) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_convergence(mut self, convergence: ConvergenceConfig) -> Self {
        self.convergence = convergence;
        self
    }

    pub fn budget(&self) -> BudgetSpec {
        self.budget.unwrap_or_else(|| self.testbed.default_budget())
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size.unwrap_or(4 * self.workers).max(1)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.iterations == 0 {
            return bad("iterations must be >= 1");
        }
        if self.workers == 0 {
            return bad("workers must be >= 1");
        }
        if !(self.dedup_tol > 0.0 && self.dedup_tol.is_finite()) {
            return bad("dedup_tol must be > 0");
        }
        if self.seeds.is_empty() {
            return bad("seeds must not be empty");
        }
        if self.batch_size == Some(0) {
            return bad("batch_size must be >= 1");
        }
        if self.convergence.window == 0 {
            return bad("convergence.window must be >= 1");
        }
        if let MethodConfig::Maa {
            dim_cap,
            angle_tol_deg,
            ..
        } = &self.method
        {
            let dim = self.testbed.dimension();
            if dim > *dim_cap {
                return Err(HarnessError::Incompatible(format!(
                    "MAA is capped at {dim_cap} dimensions but the testbed has {dim}; \
                     raise method.dim_cap to opt in"
                )));
            }
            if dim < 2 {
                return Err(HarnessError::Incompatible(
                    "MAA needs at least 2 MGA dimensions".into(),
                ));
            }
            if !(*angle_tol_deg >= 0.0 && *angle_tol_deg < 90.0) {
                return bad("method.angle_tol_deg must be within [0, 90)");
            }
        }
        Ok(())
    }
}
