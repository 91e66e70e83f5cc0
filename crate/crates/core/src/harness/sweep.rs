use serde::{Deserialize, Serialize};

use super::{run_with_seed, ExperimentConfig};

/// One (config, seed) cell of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub method: String,
    pub testbed: String,
    pub dimension: usize,
    pub seed: u64,
    /// `None` when the run succeeded.
    pub error: Option<String>,
    pub unique_count: usize,
    pub iterations: usize,
    pub efficiency: f64,
    pub vesa_final: f64,
    pub mean_formulate_ns: f64,
    pub mean_solve_ns: f64,
    pub total_wall_ns: u64,
    pub converged_at: Option<usize>,
}

/// Run every config once per seed. Seed `s` sets both the testbed seed and
/// the method seed, so rows are reproducible one by one. A failing run is
/// recorded in its row and the sweep moves on.
pub fn sweep(configs: &[ExperimentConfig]) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for config in configs {
        for &seed in &config.seeds {
            let mut cfg = config.clone();
            cfg.testbed = config.testbed.with_seed(seed);
            cfg.seeds = vec![seed];
            let mut row = SweepRow {
                method: cfg.method.method().to_string(),
                testbed: cfg.testbed.name().to_string(),
                dimension: cfg.testbed.dimension(),
                seed,
                error: None,
                unique_count: 0,
                iterations: 0,
                efficiency: 0.0,
                vesa_final: 0.0,
                mean_formulate_ns: 0.0,
                mean_solve_ns: 0.0,
                total_wall_ns: 0,
                converged_at: None,
            };
            match run_with_seed(&cfg, seed) {
                Ok(r) => {
                    row.unique_count = r.summary.unique_count;
                    row.iterations = r.summary.iterations;
                    row.efficiency = r.summary.efficiency;
                    row.vesa_final = r.summary.vesa_final;
                    row.mean_formulate_ns = r.mean_formulate_ns();
                    row.mean_solve_ns = r.mean_solve_ns();
                    row.total_wall_ns = r.summary.total_wall_ns;
                    row.converged_at = r.summary.converged_at;
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            rows.push(row);
        }
    }
    rows
}
