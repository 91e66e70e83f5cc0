use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{LinearProgram, LpBackend, LpError, Relation, RevisedSimplex, Sense, Solution, Status};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetMode {
    #[serde(alias = "rel")]
    Relative,
    #[serde(alias = "abs")]
    Absolute,
}

/// How far from the optimum the near-optimal region extends.
///
/// Relative: `z*(1 + amount)`. Absolute: `z* + amount`. Both are read in
/// the problem's own sense, so for a maximization the floor is
/// `z*(1 - amount)` or `z* - amount`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    pub mode: BudgetMode,
    pub amount: f64,
}

impl BudgetSpec {
    pub fn relative(amount: f64) -> Self {
        BudgetSpec {
            mode: BudgetMode::Relative,
            amount,
        }
    }

    pub fn absolute(amount: f64) -> Self {
        BudgetSpec {
            mode: BudgetMode::Absolute,
            amount,
        }
    }

    /// Budget bound on the minimization-form objective.
    pub fn resolve<T: Scalar>(&self, optimal_value: T, sense: Sense) -> Result<T, LpError> {
        if !(self.amount.is_finite() && self.amount >= 0.0) {
            return Err(LpError::NegativeBudget);
        }
        let amount = T::lit(self.amount);
        match self.mode {
            BudgetMode::Relative => {
                if optimal_value <= T::zero() {
                    return Err(LpError::DegenerateBudget(optimal_value.as_f64()));
                }
                Ok(match sense {
                    Sense::Minimize => optimal_value * (T::one() + amount),
                    Sense::Maximize => -(optimal_value * (T::one() - amount)),
                })
            }
            BudgetMode::Absolute => Ok(match sense {
                Sense::Minimize => optimal_value + amount,
                Sense::Maximize => -(optimal_value - amount),
            }),
        }
    }
}

/// Base LP plus the budget row `c·x <= budget` (minimization form) and the
/// variables the alternative objectives range over.
#[derive(Debug, Clone)]
pub struct MgaProblem<T> {
    base: LinearProgram<T>,
    constrained: LinearProgram<T>,
    optimal_value: T,
    budget: T,
    mga_vars: Vec<usize>,
}

pub fn make_mga_problem<T: Scalar>(
    lp: &LinearProgram<T>,
    opt: &Solution<T>,
    budget: BudgetSpec,
    mga_vars: &[usize],
) -> Result<MgaProblem<T>, LpError> {
    if opt.status != Status::Optimal {
        return Err(LpError::NotOptimal(opt.status));
    }
    if mga_vars.is_empty() {
        return Err(LpError::EmptyMgaVars);
    }
    let mut seen = vec![false; lp.num_vars()];
    for &k in mga_vars {
        if k >= lp.num_vars() || std::mem::replace(&mut seen[k], true) {
            return Err(LpError::BadMgaVar(k));
        }
    }
    let bound = budget.resolve(opt.objective_value, lp.sense())?;
    let row: Vec<(usize, T)> = lp
        .min_form_objective()
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c != T::zero())
        .collect();
    let mut constrained = lp.clone();
    constrained.add_constraint(row, Relation::Le, bound)?;
    constrained.set_objective(vec![T::zero(); lp.num_vars()])?;
    constrained.set_sense(Sense::Minimize);
    Ok(MgaProblem {
        base: lp.clone(),
        constrained,
        optimal_value: opt.objective_value,
        budget: bound,
        mga_vars: mga_vars.to_vec(),
    })
}

impl<T: Scalar> MgaProblem<T> {
    pub fn base(&self) -> &LinearProgram<T> {
        &self.base
    }

    /// Base constraints plus the budget row, zero objective.
    pub fn lp(&self) -> &LinearProgram<T> {
        &self.constrained
    }

    pub fn optimal_value(&self) -> T {
        self.optimal_value
    }

    /// Bound on the minimization-form base objective.
    pub fn budget(&self) -> T {
        self.budget
    }

    pub fn mga_vars(&self) -> &[usize] {
        &self.mga_vars
    }

    pub fn dims(&self) -> usize {
        self.mga_vars.len()
    }

    /// The budget row coefficients (equal to the minimization-form objective).
    pub fn budget_row(&self) -> Vec<T> {
        self.base.min_form_objective()
    }

    pub fn project(&self, x: &[T]) -> Vec<T> {
        self.mga_vars.iter().map(|&k| x[k]).collect()
    }

    /// Base objective of `x` in the base problem's own sense.
    pub fn cost(&self, x: &[T]) -> T {
        self.base.objective_value(x)
    }

    /// How far `x` exceeds the budget (positive means over budget).
    pub fn budget_excess(&self, x: &[T]) -> T {
        crate::scalar::dot(&self.budget_row(), x) - self.budget
    }

    pub fn within_budget(&self, x: &[T]) -> bool {
        self.budget_excess(x) <= T::FEAS_TOL * T::one().max(self.budget.abs())
    }

    /// Full-length minimization objective with `weights` on the MGA variables.
    pub fn objective_for(&self, weights: &[T]) -> Result<Vec<T>, LpError> {
        if weights.len() != self.mga_vars.len() {
            return Err(LpError::Dimension {
                expected: self.mga_vars.len(),
                got: weights.len(),
            });
        }
        let mut c = vec![T::zero(); self.base.num_vars()];
        for (&k, &w) in self.mga_vars.iter().zip(weights) {
            c[k] = w;
        }
        Ok(c)
    }
}

/// A backend loaded with an [`MgaProblem`], reused across objective vectors.
#[derive(Debug, Clone)]
pub struct MgaSolver<T, B = RevisedSimplex<T>> {
    problem: Arc<MgaProblem<T>>,
    backend: B,
}

impl<T: Scalar> MgaSolver<T, RevisedSimplex<T>> {
    pub fn new(problem: Arc<MgaProblem<T>>) -> Result<Self, LpError> {
        Self::with_backend(problem, RevisedSimplex::default())
    }
}

impl<T: Scalar, B: LpBackend<T>> MgaSolver<T, B> {
    pub fn with_backend(problem: Arc<MgaProblem<T>>, mut backend: B) -> Result<Self, LpError> {
        backend.load(problem.lp())?;
        Ok(MgaSolver { problem, backend })
    }

    pub fn problem(&self) -> &Arc<MgaProblem<T>> {
        &self.problem
    }

    /// Solve once with the base objective so later solves start from a
    /// feasible (near-optimal) basis.
    pub fn prime(&mut self) -> Result<Solution<T>, LpError> {
        let c = self.problem.budget_row();
        self.backend.set_objective(&c, Sense::Minimize)?;
        let sol = self.backend.solve()?;
        match sol.status {
            Status::Optimal => Ok(sol),
            Status::Infeasible => Err(LpError::Numerical(
                "budget-constrained problem infeasible at its own optimum".into(),
            )),
            Status::Unbounded => Err(LpError::UnboundedMga),
        }
    }

    /// Minimize `Σ w_k x_k` over the MGA variables inside the budget.
    pub fn solve(&mut self, weights: &[T]) -> Result<Solution<T>, LpError> {
        let c = self.problem.objective_for(weights)?;
        self.backend.set_objective(&c, Sense::Minimize)?;
        let sol = self.backend.solve()?;
        match sol.status {
            Status::Optimal => Ok(sol),
            Status::Infeasible => Err(LpError::Numerical(
                "budget-constrained problem reported infeasible".into(),
            )),
            Status::Unbounded => Err(LpError::UnboundedMga),
        }
    }
}

/// One-shot cold solve of an alternative objective.
pub fn solve_with_objective<T: Scalar>(
    problem: &MgaProblem<T>,
    weights: &[T],
) -> Result<Solution<T>, LpError> {
    MgaSolver::new(Arc::new(problem.clone()))?.solve(weights)
}
