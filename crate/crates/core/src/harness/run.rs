use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::{ExperimentConfig, HarnessError, IterationRow, MethodConfig, RunReport, Summary};
use crate::archive::{SolutionArchive, SolutionRecord};
use crate::geometry::{converged, ConvergenceRule, Decision, VesaEstimate};
use crate::lp::{make_mga_problem, solve, MgaProblem, MgaSolver, Solution, Status};
use crate::methods::{
    default_brackets, hybrid_schedule, maa_init, Hsj, Maa, MinMax, ObjectiveVector, RandomVector,
};
use crate::testbeds::Instance;

/// A finished run with everything needed for follow-up analysis.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    /// Every MGA solution with full decision vectors.
    pub archive: SolutionArchive<f64>,
    pub base: Solution<f64>,
    pub instance: Instance,
}

/// Run with the first configured seed.
pub fn run(config: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    config.validate()?;
    Ok(run_detailed(config, config.seeds[0])?.report)
}

pub fn run_with_seed(config: &ExperimentConfig, seed: u64) -> Result<RunReport, HarnessError> {
    Ok(run_detailed(config, seed)?.report)
}

/// Base solve, budget row, then the method's proposal/solve loop. `seed`
/// drives the method's random choices; the testbed keeps its own seed.
pub fn run_detailed(config: &ExperimentConfig, seed: u64) -> Result<RunOutput, HarnessError> {
    config.validate()?;
    let instance = config.testbed.build()?;
    let base = solve(&instance.lp)?;
    if base.status != Status::Optimal {
        return Err(HarnessError::BaseNotOptimal(base.status));
    }
    let problem = Arc::new(make_mga_problem(
        &instance.lp,
        &base,
        config.budget(),
        &instance.mga_vars,
    )?);
    let mut root = MgaSolver::new(problem.clone())?;
    root.prime()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;

    let base_point = problem.project(&base.values);
    let dims = problem.dims();
    let mut warnings = Vec::new();
    let mut vesa = match VesaEstimate::new(dims) {
        Ok(v) => Some(v),
        Err(e) => {
            warnings.push(format!("volume estimate disabled: {e}"));
            None
        }
    };
    if let Some(v) = vesa.as_mut() {
        v.insert(&base_point)?;
    }

    let mut runner = Runner {
        config,
        problem: problem.clone(),
        root,
        pool,
        archive: SolutionArchive::new(config.dedup_tol),
        vesa,
        trajectory: Vec::new(),
        rule: config
            .convergence
            .enabled
            .then(|| config.convergence.rule()),
        converged_at: None,
        terminated: None,
        warnings,
    };
    match &config.method {
        MethodConfig::Hsj => runner.hsj(&base_point)?,
        MethodConfig::Random => {
            let mut random = RandomVector::new(seed);
            let mut list = Vec::with_capacity(config.iterations);
            for it in 1..=config.iterations {
                let t = Instant::now();
                let v = random.propose(dims, it)?;
                list.push((v, elapsed_ns(t)));
            }
            runner.solve_list(list)?;
        }
        MethodConfig::MinMax => {
            let mut minmax = MinMax::new(seed);
            let count = config.iterations.min(minmax.remaining(dims));
            if count < config.iterations {
                runner.terminated = Some(format!(
                    "all {count} nonzero sign vectors used before the iteration limit"
                ));
            }
            let t = Instant::now();
            let vs = minmax.propose_batch(dims, count, 1)?;
            runner.solve_list(spread(vs, elapsed_ns(t)))?;
        }
        MethodConfig::Hybrid { brackets, interest } => {
            let mut list = brackets.clone().unwrap_or_else(|| default_brackets(dims));
            list.extend(interest.iter().cloned());
            let t = Instant::now();
            let mut random = RandomVector::new(seed);
            let (vs, warn) = hybrid_schedule(dims, config.iterations, &list, &mut random)?;
            let ns = elapsed_ns(t);
            runner.warnings.extend(warn);
            runner.solve_list(spread(vs, ns))?;
        }
        MethodConfig::Maa {
            angle_tol_deg,
            dim_cap,
            max_init_iters,
        } => {
            let maa = Maa::new(*angle_tol_deg, *dim_cap);
            let max_init = max_init_iters.unwrap_or(20 * (dims + 1));
            runner.maa(maa, &base_point, seed, max_init)?;
        }
    }

    let report = runner.finish(seed, &instance, &base_point, problem.as_ref());
    Ok(RunOutput {
        report,
        archive: runner.archive,
        base,
        instance,
    })
}

fn elapsed_ns(t: Instant) -> u64 {
    (t.elapsed().as_nanos() as u64).max(1)
}

/// Pair each vector with an even share of the time spent producing them.
fn spread(vs: Vec<ObjectiveVector<f64>>, total_ns: u64) -> Vec<(ObjectiveVector<f64>, u64)> {
    let share = (total_ns / vs.len().max(1) as u64).max(1);
    vs.into_iter().map(|v| (v, share)).collect()
}

struct Runner<'a> {
    config: &'a ExperimentConfig,
    problem: Arc<MgaProblem<f64>>,
    root: MgaSolver<f64>,
    pool: rayon::ThreadPool,
    archive: SolutionArchive<f64>,
    vesa: Option<VesaEstimate<f64>>,
    trajectory: Vec<f64>,
    rule: Option<ConvergenceRule>,
    converged_at: Option<usize>,
    terminated: Option<String>,
    warnings: Vec<String>,
}

impl Runner<'_> {
    fn done(&self) -> bool {
        self.converged_at.is_some() || self.archive.len() >= self.config.iterations
    }

    fn record(
        &mut self,
        v: ObjectiveVector<f64>,
        sol: Solution<f64>,
        formulate_ns: u64,
        wall_ns: u64,
    ) -> Result<(), HarnessError> {
        let point = self.problem.project(&sol.values);
        let total = match self.vesa.as_mut() {
            Some(est) => est.insert(&point)?,
            None => 0.0,
        };
        self.trajectory.push(total);
        let iteration = v.iteration;
        self.archive.push(SolutionRecord {
            iteration,
            cost: self.problem.cost(&sol.values),
            point,
            objective: Some(v),
            unique: false,
            formulate_ns,
            solve_ns: sol.solve_wall_time_ns.max(1),
            wall_ns: wall_ns.max(formulate_ns + sol.solve_wall_time_ns.max(1)),
            values: sol.values,
        });
        if let (Some(rule), None) = (self.rule, self.converged_at) {
            match converged(&self.trajectory, &rule) {
                Decision::Continue => {}
                Decision::Converged => self.converged_at = Some(iteration),
                Decision::ConvergedZeroVolume => {
                    self.converged_at = Some(iteration);
                    self.warnings.push(format!(
                        "converged at iteration {iteration} with zero volume; \
                         the method may only be revisiting the same few points"
                    ));
                }
            }
        }
        Ok(())
    }

    fn solve_error(v: &ObjectiveVector<f64>, e: crate::lp::LpError) -> HarnessError {
        HarnessError::Solve {
            iteration: v.iteration,
            weights: v.weights.clone(),
            source: e,
        }
    }

    /// Sequential: each proposal depends on everything archived so far, and
    /// every solve warm-starts from the previous basis.
    fn hsj(&mut self, base_point: &[f64]) -> Result<(), HarnessError> {
        let mut state = Hsj::new(base_point.len());
        state.observe(base_point);
        for it in 1..=self.config.iterations {
            let t = Instant::now();
            let v = state.propose(it)?;
            let formulate_ns = elapsed_ns(t);
            let sol = self
                .root
                .solve(&v.weights)
                .map_err(|e| Self::solve_error(&v, e))?;
            let wall = elapsed_ns(t);
            state.observe(&self.problem.project(&sol.values));
            self.record(v, sol, formulate_ns, wall)?;
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    /// Solve a fixed list in batches. Every solve starts from the primed root
    /// basis, so results do not depend on which worker ran them; they are
    /// archived in iteration order and anything past a convergence point is
    /// discarded.
    fn solve_list(&mut self, list: Vec<(ObjectiveVector<f64>, u64)>) -> Result<(), HarnessError> {
        let batch = self.config.batch_size();
        for chunk in list.chunks(batch) {
            if self.done() {
                break;
            }
            let root = &self.root;
            let results: Vec<Result<(Solution<f64>, u64), HarnessError>> =
                self.pool.install(|| {
                    chunk
                        .par_iter()
                        .map(|(v, _)| {
                            let t = Instant::now();
                            let mut solver = root.clone();
                            let sol = solver
                                .solve(&v.weights)
                                .map_err(|e| Self::solve_error(v, e))?;
                            Ok((sol, elapsed_ns(t)))
                        })
                        .collect()
                });
            for ((v, formulate_ns), res) in chunk.iter().zip(results) {
                if self.done() {
                    break;
                }
                let (sol, task_ns) = res?;
                self.record(v.clone(), sol, *formulate_ns, formulate_ns + task_ns)?;
            }
        }
        Ok(())
    }

    fn maa(
        &mut self,
        mut maa: Maa<f64>,
        base_point: &[f64],
        seed: u64,
        max_init: usize,
    ) -> Result<(), HarnessError> {
        let mut random = RandomVector::new(seed);
        let limit = max_init.min(self.config.iterations);
        maa_init(base_point, &mut random, limit, |v| {
            let t = Instant::now();
            let formulate_ns = elapsed_ns(t);
            let mut solver = self.root.clone();
            let sol = solver
                .solve(&v.weights)
                .map_err(|e| Self::solve_error(&v, e))?;
            let point = self.problem.project(&sol.values);
            let wall = elapsed_ns(t);
            self.record(v, sol, formulate_ns, wall)?;
            Ok::<_, HarnessError>(point)
        })?;

        while !self.done() {
            let t = Instant::now();
            let mut points = vec![base_point.to_vec()];
            points.extend(self.archive.unique_points());
            let mut vs = maa.propose(&points, self.archive.len() + 1)?;
            let stage_ns = elapsed_ns(t);
            if vs.is_empty() {
                self.terminated = Some("every hull facet direction has been explored".into());
                break;
            }
            vs.truncate(self.config.iterations - self.archive.len());
            self.solve_list(spread(vs, stage_ns))?;
        }
        Ok(())
    }

    fn finish(
        &mut self,
        seed: u64,
        instance: &Instance,
        base_point: &[f64],
        problem: &MgaProblem<f64>,
    ) -> RunReport {
        let rows = self
            .archive
            .records()
            .iter()
            .zip(&self.trajectory)
            .map(|(r, &vesa_total)| {
                let obj = r.objective.as_ref();
                IterationRow {
                    iteration: r.iteration,
                    formulate_ns: r.formulate_ns,
                    solve_ns: r.solve_ns,
                    wall_ns: r.wall_ns,
                    unique: r.unique,
                    vesa_total,
                    cost: r.cost,
                    objective_vector: obj.map(|o| o.weights.clone()).unwrap_or_default(),
                    mga_point: r.point.clone(),
                    facet: obj.and_then(|o| o.facet),
                }
            })
            .collect();
        let mut report = RunReport {
            config: self.config.clone(),
            seed,
            method: self.config.method.method(),
            testbed: self.config.testbed.name().to_string(),
            dims: problem.dims(),
            labels: instance.labels.clone(),
            sense: problem.base().sense(),
            optimal_value: problem.optimal_value(),
            budget: problem.budget(),
            base_point: base_point.to_vec(),
            rows,
            summary: Summary {
                unique_count: 0,
                iterations: 0,
                efficiency: 0.0,
                vesa_final: 0.0,
                total_wall_ns: 0,
                formulate_ns_total: 0,
                solve_ns_total: 0,
                converged_at: self.converged_at,
                terminated: self.terminated.clone(),
                budget_violations: 0,
                duplicate_objectives: 0,
                warnings: self.warnings.clone(),
            },
        };
        report.refresh();
        report
    }
}
