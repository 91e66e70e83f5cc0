//! Linear programs, the solver backend contract and the MGA budget row.

mod budget;
mod model;
mod simplex;
pub mod text;

pub use budget::{
    make_mga_problem, solve_with_objective, BudgetMode, BudgetSpec, MgaProblem, MgaSolver,
};
pub use model::{Constraint, LinearProgram, Relation, Sense, Solution, Status};
pub use simplex::{RevisedSimplex, SimplexOptions};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("expected {expected} entries, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("row {row}: variable index {index} out of range (num_vars = {num_vars})")]
    IndexOutOfRange {
        row: usize,
        index: usize,
        num_vars: usize,
    },
    #[error("row {row}: variable index {index} appears twice")]
    DuplicateIndex { row: usize, index: usize },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("x{0} has an infinite lower bound; only finite lower bounds are supported")]
    InfiniteLowerBound(usize),
    #[error("x{var}: lower bound exceeds upper bound")]
    InvertedBounds { var: usize },
    #[error("no problem loaded into the backend")]
    NotLoaded,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("iteration limit of {0} reached")]
    IterationLimit(usize),
    #[error("relative budget needs a positive optimum, got z* = {0}")]
    DegenerateBudget(f64),
    #[error("budget amount must be finite and non-negative")]
    NegativeBudget,
    #[error("MGA variable set is empty")]
    EmptyMgaVars,
    #[error("MGA variable {0} repeated or out of range")]
    BadMgaVar(usize),
    #[error("base problem is not optimal ({0:?})")]
    NotOptimal(Status),
    #[error("MGA subproblem came back unbounded")]
    UnboundedMga,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Solver backend contract: load a problem, swap objectives, solve.
///
/// Implementations may keep their basis between `solve` calls on the same
/// loaded problem; `set_objective` must not discard it.
pub trait LpBackend<T> {
    fn load(&mut self, lp: &LinearProgram<T>) -> Result<(), LpError>;

    fn set_objective(&mut self, objective: &[T], sense: Sense) -> Result<(), LpError>;

    fn solve(&mut self) -> Result<Solution<T>, LpError>;
}

/// Solve with a fresh bundled backend.
pub fn solve<T: crate::Scalar>(lp: &LinearProgram<T>) -> Result<Solution<T>, LpError> {
    let mut backend = RevisedSimplex::default();
    backend.load(lp)?;
    backend.solve()
}
