use serde::{Deserialize, Serialize};

use super::LpError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[serde(alias = "min")]
    Minimize,
    #[serde(alias = "max")]
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }

    /// Signed violation of `lhs rel rhs`; zero or negative means satisfied.
    pub fn violation<T: Scalar>(self, lhs: T, rhs: T) -> T {
        match self {
            Relation::Le => lhs - rhs,
            Relation::Ge => rhs - lhs,
            Relation::Eq => (lhs - rhs).abs(),
        }
    }
}

/// One sparse constraint row `Σ coeff_j x_j rel rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T: Scalar> Constraint<T> {
    pub fn new(coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn activity(&self, x: &[T]) -> T {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

/// A linear program with per-variable bounds.
///
/// Lower bounds must be finite; upper bounds may be `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    num_vars: usize,
    objective: Vec<T>,
    sense: Sense,
    constraints: Vec<Constraint<T>>,
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> LinearProgram<T> {
    /// An LP over `num_vars` variables with zero objective, bounds `[0, +inf)`
    /// and no rows.
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![T::zero(); num_vars],
            sense,
            constraints: Vec::new(),
            lower: vec![T::zero(); num_vars],
            upper: vec![T::infinity(); num_vars],
        }
    }

    pub fn with_objective(mut self, objective: Vec<T>) -> Result<Self, LpError> {
        self.set_objective(objective)?;
        Ok(self)
    }

    pub fn set_objective(&mut self, objective: Vec<T>) -> Result<(), LpError> {
        if objective.len() != self.num_vars {
            return Err(LpError::Dimension {
                expected: self.num_vars,
                got: objective.len(),
            });
        }
        if objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective".into()));
        }
        self.objective = objective;
        Ok(())
    }

    pub fn set_sense(&mut self, sense: Sense) {
        self.sense = sense;
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<(usize, T)>,
        relation: Relation,
        rhs: T,
    ) -> Result<usize, LpError> {
        let row = self.constraints.len();
        for &(j, a) in &coeffs {
            if j >= self.num_vars {
                return Err(LpError::IndexOutOfRange {
                    row,
                    index: j,
                    num_vars: self.num_vars,
                });
            }
            if !a.is_finite() {
                return Err(LpError::NonFinite(format!("row {row}")));
            }
        }
        if !rhs.is_finite() {
            return Err(LpError::NonFinite(format!("rhs of row {row}")));
        }
        if coeffs.len() > 1 {
            let mut idx: Vec<usize> = coeffs.iter().map(|&(j, _)| j).collect();
            idx.sort_unstable();
            if let Some(w) = idx.windows(2).find(|w| w[0] == w[1]) {
                return Err(LpError::DuplicateIndex { row, index: w[0] });
            }
        }
        self.constraints
            .push(Constraint::new(coeffs, relation, rhs));
        Ok(row)
    }

    pub fn set_bounds(&mut self, var: usize, lower: T, upper: T) -> Result<(), LpError> {
        if var >= self.num_vars {
            return Err(LpError::IndexOutOfRange {
                row: usize::MAX,
                index: var,
                num_vars: self.num_vars,
            });
        }
        if !lower.is_finite() {
            return Err(LpError::InfiniteLowerBound(var));
        }
        if upper.is_nan() || upper == T::neg_infinity() {
            return Err(LpError::NonFinite(format!("upper bound of x{var}")));
        }
        if lower > upper {
            return Err(LpError::InvertedBounds { var });
        }
        self.lower[var] = lower;
        self.upper[var] = upper;
        Ok(())
    }

    pub fn set_all_bounds(&mut self, lower: T, upper: T) -> Result<(), LpError> {
        for j in 0..self.num_vars {
            self.set_bounds(j, lower, upper)?;
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn lower_bounds(&self) -> &[T] {
        &self.lower
    }

    pub fn upper_bounds(&self) -> &[T] {
        &self.upper
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        crate::scalar::dot(&self.objective, x)
    }

    /// Objective coefficients of the equivalent minimization problem.
    pub fn min_form_objective(&self) -> Vec<T> {
        match self.sense {
            Sense::Minimize => self.objective.clone(),
            Sense::Maximize => self.objective.iter().map(|&c| -c).collect(),
        }
    }

    /// Largest absolute row or bound violation of `x`.
    pub fn max_violation(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for c in &self.constraints {
            worst = worst.max(c.relation.violation(c.activity(x), c.rhs));
        }
        for j in 0..self.num_vars {
            worst = worst.max(self.lower[j] - x[j]);
            if self.upper[j].is_finite() {
                worst = worst.max(x[j] - self.upper[j]);
            }
        }
        worst
    }

    pub fn is_feasible(&self, x: &[T], tol: T) -> bool {
        x.len() == self.num_vars && self.max_violation(x) <= tol
    }

    /// Same program converted to another scalar type.
    pub fn cast<U: Scalar>(&self) -> LinearProgram<U> {
        let conv = |v: T| U::lit(v.as_f64());
        LinearProgram {
            num_vars: self.num_vars,
            objective: self.objective.iter().map(|&c| conv(c)).collect(),
            sense: self.sense,
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint {
                    coeffs: c.coeffs.iter().map(|&(j, a)| (j, conv(a))).collect(),
                    relation: c.relation,
                    rhs: conv(c.rhs),
                })
                .collect(),
            lower: self.lower.iter().map(|&v| conv(v)).collect(),
            upper: self.upper.iter().map(|&v| conv(v)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub status: Status,
    pub values: Vec<T>,
    /// Objective value in the sense of the objective that was solved.
    pub objective_value: T,
    pub solve_wall_time_ns: u64,
    pub iterations: usize,
}

impl<T: Scalar> Solution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}
