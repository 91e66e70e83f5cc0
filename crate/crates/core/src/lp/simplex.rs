//! Bounded-variable revised simplex with a product-form basis inverse.
//!
//! Every row gets a logical (slack) column, rows whose slack cannot start
//! feasible get an artificial column, and a two-phase method runs from the
//! all-logical basis. The basis inverse is kept as an eta file that is
//! rebuilt every `refactor_interval` pivots. Pricing is Dantzig's rule with
//! a Harris ratio test; after `bland_after` consecutive degenerate pivots the
//! loop switches to Bland's rule until the objective moves again.

use std::time::Instant;

use super::{LinearProgram, LpBackend, LpError, Relation, Sense, Solution, Status};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub refactor_interval: usize,
    pub bland_after: usize,
    /// `None` means `50 * (rows + cols) + 1000`.
    pub max_iterations: Option<usize>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            refactor_interval: 100,
            bland_after: 30,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

#[derive(Debug, Clone)]
struct Eta<T> {
    row: usize,
    pivot: T,
    entries: Vec<(usize, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

enum LoopEnd {
    Optimal,
    Unbounded,
}

/// The bundled LP backend.
///
/// Cloning a solved instance clones its basis, so a clone can be warm
/// started with a different objective.
#[derive(Debug, Clone)]
pub struct RevisedSimplex<T> {
    opts: SimplexOptions,
    loaded: bool,
    m: usize,
    n_struct: usize,
    cols: Vec<Vec<(usize, T)>>,
    upper: Vec<T>,
    artificial: Vec<bool>,
    shift: Vec<T>,
    rhs: Vec<T>,
    cost: Vec<T>,
    user_objective: Vec<T>,
    user_sense: Sense,
    head: Vec<usize>,
    state: Vec<VarState>,
    x: Vec<T>,
    etas: Vec<Eta<T>>,
    since_refactor: usize,
    feasible_basis: bool,
    known_infeasible: bool,
}

impl<T: Scalar> Default for RevisedSimplex<T> {
    fn default() -> Self {
        Self::new(SimplexOptions::default())
    }
}

impl<T: Scalar> RevisedSimplex<T> {
    pub fn new(opts: SimplexOptions) -> Self {
        RevisedSimplex {
            opts,
            loaded: false,
            m: 0,
            n_struct: 0,
            cols: Vec::new(),
            upper: Vec::new(),
            artificial: Vec::new(),
            shift: Vec::new(),
            rhs: Vec::new(),
            cost: Vec::new(),
            user_objective: Vec::new(),
            user_sense: Sense::Minimize,
            head: Vec::new(),
            state: Vec::new(),
            x: Vec::new(),
            etas: Vec::new(),
            since_refactor: 0,
            feasible_basis: false,
            known_infeasible: false,
        }
    }

    /// Whether the current basis is primal feasible, i.e. the next solve
    /// skips phase one.
    pub fn is_warm(&self) -> bool {
        self.feasible_basis
    }

    fn n_total(&self) -> usize {
        self.cols.len()
    }

    fn ftran(&self, v: &mut [T]) {
        for eta in &self.etas {
            let vr = v[eta.row];
            if vr == T::zero() {
                continue;
            }
            let vr = vr / eta.pivot;
            v[eta.row] = vr;
            for &(i, a) in &eta.entries {
                v[i] -= a * vr;
            }
        }
    }

    fn btran(&self, y: &mut [T]) {
        for eta in self.etas.iter().rev() {
            let mut s = y[eta.row];
            for &(i, a) in &eta.entries {
                s -= a * y[i];
            }
            y[eta.row] = s / eta.pivot;
        }
    }

    fn column_dense(&self, j: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.m];
        for &(i, a) in &self.cols[j] {
            v[i] = a;
        }
        v
    }

    fn make_eta(row: usize, alpha: &[T]) -> Eta<T> {
        let drop = T::lit(1e-14);
        let entries = alpha
            .iter()
            .enumerate()
            .filter(|&(i, &a)| i != row && a.abs() > drop)
            .map(|(i, &a)| (i, a))
            .collect();
        Eta {
            row,
            pivot: alpha[row],
            entries,
        }
    }

    /// Rebuild the eta file for the current basic set and recompute the
    /// basic values from scratch.
    fn refactor(&mut self) -> Result<(), LpError> {
        let basics: Vec<usize> = self.head.clone();
        self.etas.clear();
        let mut new_head = vec![usize::MAX; self.m];
        let mut pending = Vec::new();
        for &j in &basics {
            let col = &self.cols[j];
            if col.len() == 1 && new_head[col[0].0] == usize::MAX {
                let (i, a) = col[0];
                new_head[i] = j;
                if a != T::one() {
                    self.etas.push(Eta {
                        row: i,
                        pivot: a,
                        entries: Vec::new(),
                    });
                }
            } else {
                pending.push(j);
            }
        }
        pending.sort_by_key(|&j| (self.cols[j].len(), j));
        for j in pending {
            let mut alpha = self.column_dense(j);
            self.ftran(&mut alpha);
            let mut best = usize::MAX;
            let mut best_abs = T::zero();
            for (i, &a) in alpha.iter().enumerate() {
                if new_head[i] == usize::MAX && a.abs() > best_abs {
                    best_abs = a.abs();
                    best = i;
                }
            }
            if best == usize::MAX || best_abs < T::PIVOT_TOL {
                return Err(LpError::Numerical(
                    "singular basis during refactorization".into(),
                ));
            }
            new_head[best] = j;
            self.etas.push(Self::make_eta(best, &alpha));
        }
        self.head = new_head;
        self.since_refactor = 0;
        self.recompute_basics();
        Ok(())
    }

    fn recompute_basics(&mut self) {
        let mut v = self.rhs.clone();
        for j in 0..self.n_total() {
            if self.state[j] == VarState::AtUpper {
                let u = self.upper[j];
                for &(i, a) in &self.cols[j] {
                    v[i] -= a * u;
                }
            }
        }
        self.ftran(&mut v);
        for (r, &j) in self.head.iter().enumerate() {
            self.x[j] = v[r];
        }
    }

    fn phase_cost(&self, phase: Phase, j: usize) -> T {
        match phase {
            Phase::One => {
                if self.artificial[j] {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Phase::Two => self.cost[j],
        }
    }

    fn max_iterations(&self) -> usize {
        self.opts
            .max_iterations
            .unwrap_or(50 * (self.m + self.n_total()) + 1000)
    }

    fn run_phase(&mut self, phase: Phase, iterations: &mut usize) -> Result<LoopEnd, LpError> {
        let limit = self.max_iterations();
        let mut degenerate_streak = 0usize;
        let mut rechecked = false;
        let harris = T::FEAS_TOL * T::lit(1e-3);
        loop {
            if *iterations >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            if self.since_refactor >= self.opts.refactor_interval {
                self.refactor()?;
            }
            let bland = degenerate_streak >= self.opts.bland_after;

            // duals
            let mut y: Vec<T> = self
                .head
                .iter()
                .map(|&j| self.phase_cost(phase, j))
                .collect();
            self.btran(&mut y);

            // pricing
            let mut entering: Option<(usize, T)> = None;
            for j in 0..self.n_total() {
                let st = self.state[j];
                if st == VarState::Basic || self.upper[j] == T::zero() {
                    continue;
                }
                let mut d = self.phase_cost(phase, j);
                for &(i, a) in &self.cols[j] {
                    d -= y[i] * a;
                }
                let eligible = match st {
                    VarState::AtLower => d < -T::OPT_TOL,
                    VarState::AtUpper => d > T::OPT_TOL,
                    VarState::Basic => false,
                };
                if !eligible {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                match entering {
                    Some((_, best)) if best.abs() >= d.abs() => {}
                    _ => entering = Some((j, d)),
                }
            }
            let Some((q, _)) = entering else {
                if self.since_refactor > 0 && !rechecked {
                    // re-price on a fresh factorization before declaring optimality
                    self.refactor()?;
                    rechecked = true;
                    continue;
                }
                return Ok(LoopEnd::Optimal);
            };
            rechecked = false;
            *iterations += 1;

            let sigma = if self.state[q] == VarState::AtLower {
                T::one()
            } else {
                -T::one()
            };
            let mut alpha = self.column_dense(q);
            self.ftran(&mut alpha);

            // ratio test
            let range_q = self.upper[q];
            let mut leave: Option<(usize, T)> = None;
            if bland {
                let mut best_t = T::infinity();
                for r in 0..self.m {
                    let dr = sigma * alpha[r];
                    if dr.abs() <= T::PIVOT_TOL {
                        continue;
                    }
                    let j = self.head[r];
                    let t = if dr > T::zero() {
                        self.x[j].max(T::zero()) / dr
                    } else if self.upper[j].is_finite() {
                        (self.upper[j] - self.x[j]).max(T::zero()) / (-dr)
                    } else {
                        continue;
                    };
                    let better = match leave {
                        None => true,
                        Some((lr, _)) => t < best_t || (t == best_t && j < self.head[lr]),
                    };
                    if better {
                        best_t = t;
                        leave = Some((r, t));
                    }
                }
            } else {
                let mut theta_max = T::infinity();
                for r in 0..self.m {
                    let dr = sigma * alpha[r];
                    if dr.abs() <= T::PIVOT_TOL {
                        continue;
                    }
                    let j = self.head[r];
                    let t = if dr > T::zero() {
                        (self.x[j] + harris) / dr
                    } else if self.upper[j].is_finite() {
                        (self.upper[j] - self.x[j] + harris) / (-dr)
                    } else {
                        continue;
                    };
                    theta_max = theta_max.min(t);
                }
                if theta_max.is_finite() {
                    let mut best_abs = T::zero();
                    for r in 0..self.m {
                        let dr = sigma * alpha[r];
                        if dr.abs() <= T::PIVOT_TOL {
                            continue;
                        }
                        let j = self.head[r];
                        let t = if dr > T::zero() {
                            self.x[j] / dr
                        } else if self.upper[j].is_finite() {
                            (self.upper[j] - self.x[j]) / (-dr)
                        } else {
                            continue;
                        };
                        if t <= theta_max && dr.abs() > best_abs {
                            best_abs = dr.abs();
                            leave = Some((r, t.max(T::zero())));
                        }
                    }
                }
            }

            let flip = match leave {
                None => range_q.is_finite(),
                Some((_, t)) => range_q < t,
            };
            let theta = if flip {
                range_q
            } else {
                match leave {
                    Some((_, t)) => t,
                    None => return Ok(LoopEnd::Unbounded),
                }
            };

            if theta <= T::FEAS_TOL * T::lit(1e-6) {
                degenerate_streak += 1;
            } else {
                degenerate_streak = 0;
            }

            for (r, &a) in alpha.iter().enumerate() {
                if a != T::zero() {
                    let j = self.head[r];
                    self.x[j] -= theta * sigma * a;
                }
            }
            if flip {
                self.state[q] = if sigma > T::zero() {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                };
                self.x[q] = if sigma > T::zero() {
                    range_q
                } else {
                    T::zero()
                };
                continue;
            }
            let (r, _) = leave.expect("pivot row");
            let leaving = self.head[r];
            let dr = sigma * alpha[r];
            if dr > T::zero() {
                self.state[leaving] = VarState::AtLower;
                self.x[leaving] = T::zero();
            } else {
                self.state[leaving] = VarState::AtUpper;
                self.x[leaving] = self.upper[leaving];
            }
            if self.artificial[leaving] {
                self.upper[leaving] = T::zero();
                self.state[leaving] = VarState::AtLower;
                self.x[leaving] = T::zero();
            }
            self.x[q] = if sigma > T::zero() {
                theta
            } else {
                range_q - theta
            };
            self.state[q] = VarState::Basic;
            self.head[r] = q;
            self.etas.push(Self::make_eta(r, &alpha));
            self.since_refactor += 1;
        }
    }

    fn phase_one(&mut self, iterations: &mut usize) -> Result<bool, LpError> {
        match self.run_phase(Phase::One, iterations)? {
            LoopEnd::Optimal => {}
            LoopEnd::Unbounded => {
                return Err(LpError::Numerical("phase one reported unbounded".into()))
            }
        }
        let infeasibility: T = (0..self.n_total())
            .filter(|&j| self.artificial[j])
            .map(|j| self.x[j].max(T::zero()))
            .sum();
        let scale = self.rhs.iter().fold(T::one(), |m, &b| m.max(b.abs()));
        if infeasibility > T::FEAS_TOL * scale.sqrt() {
            return Ok(false);
        }
        for j in 0..self.n_total() {
            if self.artificial[j] {
                self.upper[j] = T::zero();
                if self.state[j] != VarState::Basic {
                    self.state[j] = VarState::AtLower;
                    self.x[j] = T::zero();
                }
            }
        }
        Ok(true)
    }

    fn extract(&self) -> Vec<T> {
        (0..self.n_struct)
            .map(|j| self.shift[j] + self.x[j])
            .collect()
    }
}

impl<T: Scalar> LpBackend<T> for RevisedSimplex<T> {
    fn load(&mut self, lp: &LinearProgram<T>) -> Result<(), LpError> {
        let n = lp.num_vars();
        let m = lp.num_constraints();
        let lower = lp.lower_bounds();
        let upper = lp.upper_bounds();

        let mut cols: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut slack_coef = Vec::with_capacity(m);
        let mut use_artificial = Vec::with_capacity(m);
        for (i, c) in lp.constraints().iter().enumerate() {
            let shifted: T = c.rhs - c.coeffs.iter().map(|&(j, a)| a * lower[j]).sum::<T>();
            // slack s: a.x + coef*s = b with s >= 0 (upper 0 for equalities)
            let (coef, start_ok) = match c.relation {
                Relation::Le => (T::one(), shifted >= T::zero()),
                Relation::Ge => (-T::one(), shifted <= T::zero()),
                Relation::Eq => (T::one(), shifted == T::zero()),
            };
            let sign = if start_ok {
                if coef < T::zero() {
                    -T::one()
                } else {
                    T::one()
                }
            } else if shifted < T::zero() {
                -T::one()
            } else {
                T::one()
            };
            for &(j, a) in &c.coeffs {
                if a != T::zero() {
                    cols[j].push((i, sign * a));
                }
            }
            rhs.push(sign * shifted);
            row_sign.push(sign);
            slack_coef.push(sign * coef);
            use_artificial.push(!start_ok);
        }

        let mut up: Vec<T> = (0..n).map(|j| upper[j] - lower[j]).collect();
        let mut artificial = vec![false; n];
        let mut head = vec![usize::MAX; m];
        for i in 0..m {
            cols.push(vec![(i, slack_coef[i])]);
            up.push(if lp.constraints()[i].relation == Relation::Eq {
                T::zero()
            } else {
                T::infinity()
            });
            artificial.push(false);
            if !use_artificial[i] {
                head[i] = n + i;
            }
        }
        for i in 0..m {
            if use_artificial[i] {
                head[i] = cols.len();
                cols.push(vec![(i, T::one())]);
                up.push(T::infinity());
                artificial.push(true);
            }
        }
        let total = cols.len();
        let mut state = vec![VarState::AtLower; total];
        let mut x = vec![T::zero(); total];
        for (i, &j) in head.iter().enumerate() {
            state[j] = VarState::Basic;
            x[j] = rhs[i];
        }

        self.m = m;
        self.n_struct = n;
        self.cols = cols;
        self.upper = up;
        self.artificial = artificial;
        self.shift = lower.to_vec();
        self.rhs = rhs;
        self.head = head;
        self.state = state;
        self.x = x;
        self.etas.clear();
        self.since_refactor = 0;
        self.feasible_basis = false;
        self.known_infeasible = false;
        self.loaded = true;
        self.set_objective(lp.objective(), lp.sense())
    }

    fn set_objective(&mut self, objective: &[T], sense: Sense) -> Result<(), LpError> {
        if !self.loaded {
            return Err(LpError::NotLoaded);
        }
        if objective.len() != self.n_struct {
            return Err(LpError::Dimension {
                expected: self.n_struct,
                got: objective.len(),
            });
        }
        if objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective".into()));
        }
        let mut cost = vec![T::zero(); self.n_total()];
        for (j, &c) in objective.iter().enumerate() {
            cost[j] = match sense {
                Sense::Minimize => c,
                Sense::Maximize => -c,
            };
        }
        self.cost = cost;
        self.user_objective = objective.to_vec();
        self.user_sense = sense;
        Ok(())
    }

    fn solve(&mut self) -> Result<Solution<T>, LpError> {
        if !self.loaded {
            return Err(LpError::NotLoaded);
        }
        let start = Instant::now();
        let mut iterations = 0usize;
        let finish = |status, values: Vec<T>, obj, iterations| Solution {
            status,
            values,
            objective_value: obj,
            solve_wall_time_ns: start.elapsed().as_nanos().max(1) as u64,
            iterations,
        };
        if self.known_infeasible {
            return Ok(finish(Status::Infeasible, Vec::new(), T::nan(), 0));
        }
        if !self.feasible_basis {
            if !self.phase_one(&mut iterations)? {
                self.known_infeasible = true;
                return Ok(finish(Status::Infeasible, Vec::new(), T::nan(), iterations));
            }
            self.feasible_basis = true;
        }
        match self.run_phase(Phase::Two, &mut iterations)? {
            LoopEnd::Optimal => {
                let values = self.extract();
                let obj = crate::scalar::dot(&self.user_objective, &values);
                Ok(finish(Status::Optimal, values, obj, iterations))
            }
            LoopEnd::Unbounded => {
                // the basis is still primal feasible; only the objective is bad
                Ok(finish(
                    Status::Unbounded,
                    self.extract(),
                    T::nan(),
                    iterations,
                ))
            }
        }
    }
}
