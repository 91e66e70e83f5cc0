use serde::{Deserialize, Serialize};

use super::{run_detailed, ExperimentConfig, HarnessError};

/// Redispatch comparison for one MGA solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub iteration: usize,
    pub unique: bool,
    pub variable_cost_mga: f64,
    pub variable_cost_redispatch: f64,
    pub emissions_mga: f64,
    pub emissions_redispatch: f64,
    pub variable_cost_pct_error: Option<f64>,
    pub emissions_pct_error: Option<f64>,
}

/// Run MGA on a capacity-expansion testbed, then re-optimize the dispatch of
/// every solution with its capacities held fixed.
pub fn audit_dispatch(config: &ExperimentConfig, seed: u64) -> Result<Vec<AuditRow>, HarnessError> {
    let out = run_detailed(config, seed)?;
    let model = out.instance.model.as_ref().ok_or_else(|| {
        HarnessError::Incompatible("dispatch audit needs a toy_cem testbed".into())
    })?;
    out.archive
        .records()
        .iter()
        .map(|r| {
            let a = model.redispatch_audit(&r.values)?;
            Ok(AuditRow {
                iteration: r.iteration,
                unique: r.unique,
                variable_cost_mga: a.variable_cost_mga,
                variable_cost_redispatch: a.variable_cost_redispatch,
                emissions_mga: a.emissions_mga,
                emissions_redispatch: a.emissions_redispatch,
                variable_cost_pct_error: a.variable_cost_pct_error,
                emissions_pct_error: a.emissions_pct_error,
            })
        })
        .collect()
}
