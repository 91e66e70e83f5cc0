use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, HarnessError};
use crate::geometry::VesaEstimate;
use crate::lp::Sense;
use crate::methods::Method;
use crate::scalar::linf;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRow {
    pub iteration: usize,
    pub formulate_ns: u64,
    pub solve_ns: u64,
    pub wall_ns: u64,
    pub unique: bool,
    pub vesa_total: f64,
    /// Base objective of the solution.
    pub cost: f64,
    pub objective_vector: Vec<f64>,
    pub mga_point: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facet: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub unique_count: usize,
    pub iterations: usize,
    pub efficiency: f64,
    pub vesa_final: f64,
    pub total_wall_ns: u64,
    pub formulate_ns_total: u64,
    pub solve_ns_total: u64,
    /// Iteration at which the convergence rule fired.
    pub converged_at: Option<usize>,
    /// Why the run stopped before its iteration limit, if it did.
    pub terminated: Option<String>,
    /// Records whose cost exceeds the budget.
    pub budget_violations: usize,
    /// Objective vectors that also appear earlier in the run (merges only).
    pub duplicate_objectives: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub method: Method,
    pub testbed: String,
    pub dims: usize,
    pub labels: Vec<String>,
    pub sense: Sense,
    pub optimal_value: f64,
    /// Bound on the minimization-form objective.
    pub budget: f64,
    pub base_point: Vec<f64>,
    pub rows: Vec<IterationRow>,
    pub summary: Summary,
}

/// Unique solutions per optimization.
pub fn new_solution_efficiency(report: &RunReport) -> f64 {
    if report.rows.is_empty() {
        0.0
    } else {
        report.summary.unique_count as f64 / report.rows.len() as f64
    }
}

impl RunReport {
    pub fn vesa_trajectory(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.vesa_total).collect()
    }

    pub fn unique_points(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .filter(|r| r.unique)
            .map(|r| r.mga_point.clone())
            .collect()
    }

    pub fn mean_formulate_ns(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.formulate_ns as f64))
    }

    pub fn mean_solve_ns(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.solve_ns as f64))
    }

    /// Recompute unique flags, the VESA column and summary counts from
    /// `rows`, e.g. after reloading them from disk.
    pub fn refresh(&mut self) {
        let budget_tol = budget_tolerance(self.budget);
        let tol = self.config.dedup_tol;
        let mut seen: Vec<Vec<f64>> = Vec::new();
        let mut vesa = VesaEstimate::<f64>::new(self.dims).ok();
        if let Some(v) = vesa.as_mut() {
            let _ = v.insert(&self.base_point);
        }
        let mut violations = 0;
        let (sense, budget) = (self.sense, self.budget);
        for row in &mut self.rows {
            row.unique = !seen.iter().any(|p| linf(p, &row.mga_point) <= tol);
            if row.unique {
                seen.push(row.mga_point.clone());
            }
            row.vesa_total = match vesa.as_mut() {
                Some(v) => v.insert(&row.mga_point).unwrap_or(v.total()),
                None => 0.0,
            };
            if budget_excess(sense, budget, row.cost) > budget_tol {
                violations += 1;
            }
        }
        let s = &mut self.summary;
        s.unique_count = seen.len();
        s.iterations = self.rows.len();
        s.efficiency = if self.rows.is_empty() {
            0.0
        } else {
            seen.len() as f64 / self.rows.len() as f64
        };
        s.vesa_final = self.rows.last().map_or(0.0, |r| r.vesa_total);
        s.total_wall_ns = self.rows.iter().map(|r| r.wall_ns).sum();
        s.formulate_ns_total = self.rows.iter().map(|r| r.formulate_ns).sum();
        s.solve_ns_total = self.rows.iter().map(|r| r.solve_ns).sum();
        s.budget_violations = violations;
    }
}

/// Cost over budget, in the base problem's sense.
fn budget_excess(sense: Sense, budget: f64, cost: f64) -> f64 {
    match sense {
        Sense::Minimize => cost - budget,
        Sense::Maximize => -cost - budget,
    }
}

fn mean(it: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = it.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

/// Superimpose two runs over the same near-optimal region.
pub fn merge_reports(a: &RunReport, b: &RunReport) -> Result<RunReport, HarnessError> {
    if a.config.testbed != b.config.testbed {
        return Err(HarnessError::Incompatible(
            "reports use different testbeds".into(),
        ));
    }
    if a.labels != b.labels || a.dims != b.dims {
        return Err(HarnessError::Incompatible(
            "reports use different MGA variables".into(),
        ));
    }
    if (a.budget - b.budget).abs() > 1e-9 * a.budget.abs().max(1.0) {
        return Err(HarnessError::Incompatible(format!(
            "reports use different budgets ({} vs {})",
            a.budget, b.budget
        )));
    }
    let mut out = a.clone();
    out.config.dedup_tol = a.config.dedup_tol.min(b.config.dedup_tol);
    out.rows = a.rows.iter().chain(&b.rows).cloned().collect();
    let mut duplicates = 0;
    for i in 0..out.rows.len() {
        let v = &out.rows[i].objective_vector;
        if out.rows[..i].iter().any(|r| r.objective_vector == *v) {
            duplicates += 1;
        }
    }
    for (k, row) in out.rows.iter_mut().enumerate() {
        row.iteration = k + 1;
    }
    let mut warnings: Vec<String> = a.summary.warnings.clone();
    warnings.extend(b.summary.warnings.iter().cloned());
    if a.method != b.method {
        warnings.push(format!(
            "merged runs use different methods ({} and {})",
            a.method, b.method
        ));
    }
    if duplicates > 0 && (a.method == Method::MinMax || b.method == Method::MinMax) {
        warnings.push(format!(
            "{duplicates} sign vectors were solved more than once across the merged runs"
        ));
    }
    out.summary.warnings = warnings;
    out.summary.duplicate_objectives = duplicates;
    out.summary.converged_at = None;
    out.summary.terminated = None;
    out.refresh();
    Ok(out)
}

fn budget_tolerance(budget: f64) -> f64 {
    1e-6 * budget.abs().max(1.0)
}
