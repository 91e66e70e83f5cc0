//! Argument parsing and subcommand dispatch.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mga_core::harness::{
    audit_dispatch, merge_reports, run, sweep, ExperimentConfig, MethodConfig, RunReport,
};
use mga_core::lp::text::write_lp;
use mga_core::lp::{make_mga_problem, solve, BudgetMode, BudgetSpec};
use mga_core::methods::Method;
use mga_core::testbeds::{enumerate_vertices, reference_3d, CemSpec, MgaMode, TestbedSpec};
use serde::de::DeserializeOwned;

use crate::bundle::{self, write_csv};
use crate::CliError;

/// Env var that overrides `--workers`.
pub const WORKERS_ENV: &str = "MGA_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "mga",
    version,
    about = "Modeling-to-generate-alternatives experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the 3-variable reference problem and list the vertices of its
    /// near-optimal region.
    SolveRef {
        #[arg(long, default_value_t = 3.0)]
        slack: f64,
        #[arg(long, value_enum, default_value = "abs")]
        slack_mode: SlackMode,
        /// Also write `reference.lp` and `vertices.csv` here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a testbed and export it as LP text (plus technology metadata
    /// for capacity models).
    GenTestbed {
        /// JSON testbed spec, e.g. `{"kind": "random_lp", "n": 10}`.
        #[arg(long, conflicts_with = "kind")]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Variables for `random-lp`.
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<MgaMode>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run one experiment and write a report bundle.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(short, long, default_value = "mga-out")]
        out: PathBuf,
    },
    /// Run a list of experiments over their seeds; one CSV row per run.
    Sweep {
        /// JSON experiment config, or an array of them.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Directory for `sweep.csv`; prints to stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Superimpose runs over the same near-optimal region.
    Merge {
        /// `report.json` files or bundle directories.
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Fix each MGA solution's capacities, re-optimize dispatch, and report
    /// the cost and emissions gap.
    AuditDispatch {
        /// Defaults to the toy capacity model with Random Vector, 20 iterations.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        /// Directory for `audit.csv`; prints to stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Draw figures for one or more saved reports.
    Report {
        /// `report.json` files or bundle directories.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Variables for the pairwise panels, by name or 0-based index.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        /// Rebuild each report from its bundle CSVs instead of `report.json`.
        #[arg(long)]
        from_csv: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SlackMode {
    #[value(alias = "relative")]
    Rel,
    #[value(alias = "absolute")]
    Abs,
}

impl SlackMode {
    fn budget(self, amount: f64) -> BudgetSpec {
        match self {
            SlackMode::Rel => BudgetSpec::relative(amount),
            SlackMode::Abs => BudgetSpec::absolute(amount),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Reference3d,
    RandomLp,
    ToyCem,
}

/// Flags layered on top of a config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Seeds both the method and the testbed generator.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub slack: Option<f64>,
    #[arg(long, value_enum)]
    pub slack_mode: Option<SlackMode>,
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    /// MGA variables of a capacity model: capacity or generation.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<MgaMode>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<MgaMode, String> {
    s.parse()
}

impl Overrides {
    pub fn apply(&self, mut cfg: ExperimentConfig) -> Result<ExperimentConfig, CliError> {
        if let Some(s) = self.seed {
            cfg.seeds = vec![s];
            cfg.testbed = cfg.testbed.with_seed(s);
        }
        if let Some(w) = workers_override(self.workers)? {
            cfg.workers = w;
        }
        if let Some(n) = self.iterations {
            cfg.iterations = n;
        }
        if self.slack.is_some() || self.slack_mode.is_some() {
            let current = cfg.budget();
            let mode = self.slack_mode.unwrap_or(match current.mode {
                BudgetMode::Relative => SlackMode::Rel,
                BudgetMode::Absolute => SlackMode::Abs,
            });
            cfg.budget = Some(mode.budget(self.slack.unwrap_or(current.amount)));
        }
        if let Some(m) = self.method {
            if cfg.method.method() != m {
                cfg.method = MethodConfig::from_method(m);
            }
        }
        if let Some(mode) = self.mode {
            match &mut cfg.testbed {
                TestbedSpec::ToyCem(c) => c.mode = mode,
                other => {
                    return Err(CliError::Usage(format!(
                        "--mode applies to toy_cem testbeds, not {}",
                        other.name()
                    )))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `MGA_WORKERS` wins over the flag.
fn workers_override(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{WORKERS_ENV}={v:?} is not a worker count"))),
        _ => Ok(flag),
    }
}

/// Parse JSON, naming the offending key on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &Path) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            CliError::Usage(format!("{}: {}", origin.display(), e.inner()))
        } else {
            CliError::Usage(format!("{}: at {path}: {}", origin.display(), e.inner()))
        }
    })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_json(&text, path)
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Run(format!("{}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Run(format!("{}: {e}", path.display())))
}

fn print_summary(r: &RunReport) {
    let s = &r.summary;
    println!(
        "{} on {} ({} dims, seed {}): {} iterations, {} unique, efficiency {:.3}, VESA {}",
        r.method,
        r.testbed,
        r.dims,
        r.seed,
        s.iterations,
        s.unique_count,
        s.efficiency,
        s.vesa_final
    );
    if let Some(at) = s.converged_at {
        println!("converged at iteration {at}");
    }
    if let Some(t) = &s.terminated {
        println!("stopped early: {t}");
    }
    for w in &s.warnings {
        eprintln!("warning: {w}");
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::SolveRef {
            slack,
            slack_mode,
            out,
        } => solve_ref(slack_mode.budget(slack), out.as_deref()),
        Command::GenTestbed {
            config,
            kind,
            n,
            seed,
            mode,
            out,
        } => {
            let mut spec: TestbedSpec = match (config, kind) {
                (Some(path), _) => read_json(&path)?,
                (None, Some(Kind::Reference3d)) => TestbedSpec::Reference3d,
                (None, Some(Kind::RandomLp)) => TestbedSpec::RandomLp { n, seed: 0 },
                (None, Some(Kind::ToyCem)) => TestbedSpec::ToyCem(CemSpec::default()),
                (None, None) => return Err(CliError::Usage("give --config or --kind".into())),
            };
            if let Some(s) = seed {
                spec = spec.with_seed(s);
            }
            if let Some(m) = mode {
                match &mut spec {
                    TestbedSpec::ToyCem(c) => c.mode = m,
                    _ => return Err(CliError::Usage("--mode applies to toy_cem testbeds".into())),
                }
            }
            gen_testbed(&spec, &out)
        }
        Command::Run {
            config,
            overrides,
            out,
        } => {
            let cfg = overrides.apply(read_json(&config)?)?;
            let report = run(&cfg)?;
            for w in bundle::write_bundle(&out, &report)? {
                eprintln!("warning: {w}");
            }
            print_summary(&report);
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Sweep {
            config,
            workers,
            out,
        } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| CliError::Usage(format!("{}: {e}", config.display())))?;
            let mut configs: Vec<ExperimentConfig> = if text.trim_start().starts_with('[') {
                parse_json(&text, &config)?
            } else {
                vec![parse_json(&text, &config)?]
            };
            let workers = workers_override(workers)?;
            for c in &mut configs {
                if let Some(w) = workers {
                    c.workers = w;
                }
            }
            let rows = sweep(&configs);
            for r in rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "warning: {} n={} seed {}: {}",
                    r.method,
                    r.dimension,
                    r.seed,
                    r.error.as_deref().unwrap_or("")
                );
            }
            emit_csv(&rows, out.as_deref(), "sweep.csv")
        }
        Command::Merge { inputs, out } => {
            let reports: Vec<RunReport> = inputs
                .iter()
                .map(|p| bundle::read_report(p))
                .collect::<Result<_, _>>()?;
            let mut merged = reports[0].clone();
            for r in &reports[1..] {
                merged = merge_reports(&merged, r)?;
            }
            for w in bundle::write_bundle(&out, &merged)? {
                eprintln!("warning: {w}");
            }
            print_summary(&merged);
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::AuditDispatch {
            config,
            overrides,
            out,
        } => {
            let cfg = match config {
                Some(p) => read_json(&p)?,
                None => ExperimentConfig::new(
                    TestbedSpec::ToyCem(CemSpec::default()),
                    Method::Random,
                    20,
                ),
            };
            let cfg = overrides.apply(cfg)?;
            let rows = audit_dispatch(&cfg, cfg.seeds[0])?;
            emit_csv(&rows, out.as_deref(), "audit.csv")
        }
        Command::Report {
            inputs,
            vars,
            from_csv,
            out,
        } => {
            let reports: Vec<RunReport> = inputs
                .iter()
                .map(|p| {
                    if from_csv {
                        bundle::load_bundle(p)
                    } else {
                        bundle::read_report(p)
                    }
                })
                .collect::<Result<_, _>>()?;
            let labels = &reports[0].labels;
            if let Some(r) = reports.iter().find(|r| &r.labels != labels) {
                return Err(CliError::Usage(format!(
                    "report {} uses different MGA variables",
                    bundle::run_id(r)
                )));
            }
            let vars = vars.map(|v| resolve_vars(&v, labels)).transpose()?;
            for w in bundle::write_figures(&out, &reports, vars.as_deref())? {
                eprintln!("warning: {w}");
            }
            println!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn resolve_vars(names: &[String], labels: &[String]) -> Result<Vec<usize>, CliError> {
    names
        .iter()
        .map(|n| {
            labels
                .iter()
                .position(|l| l == n)
                .or_else(|| n.parse().ok().filter(|&i: &usize| i < labels.len()))
                .ok_or_else(|| CliError::Usage(format!("unknown variable {n:?}")))
        })
        .collect()
}

fn emit_csv<T: serde::Serialize>(
    rows: &[T],
    out: Option<&Path>,
    name: &str,
) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            create_dir(dir)?;
            let path = dir.join(name);
            write_csv(&path, rows)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for r in rows {
                w.serialize(r).map_err(|e| CliError::Run(e.to_string()))?;
            }
            w.flush().map_err(|e| CliError::Run(e.to_string()))?;
        }
    }
    Ok(())
}

fn solve_ref(budget: BudgetSpec, out: Option<&Path>) -> Result<(), CliError> {
    let lp = reference_3d::<f64>();
    let sol = solve(&lp).map_err(|e| CliError::Run(e.to_string()))?;
    println!("optimum {} at {:?}", sol.objective_value, sol.values);
    let p = make_mga_problem(&lp, &sol, budget, &[0, 1, 2])
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let verts = enumerate_vertices(p.lp()).map_err(|e| CliError::Run(e.to_string()))?;
    println!("budget {}: {} vertices", p.budget(), verts.len());
    for v in &verts {
        println!("  {}", bundle::join(v));
    }
    if let Some(dir) = out {
        create_dir(dir)?;
        write_text(&dir.join("reference.lp"), &write_lp(&lp))?;
        let mut text = String::from("x1,x2,x3\n");
        for v in &verts {
            text.push_str(
                &v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            text.push('\n');
        }
        write_text(&dir.join("vertices.csv"), &text)?;
    }
    Ok(())
}

fn gen_testbed(spec: &TestbedSpec, out: &Path) -> Result<(), CliError> {
    let inst = spec.build().map_err(|e| CliError::Usage(e.to_string()))?;
    create_dir(out)?;
    write_text(&out.join("model.lp"), &write_lp(&inst.lp))?;
    let json = serde_json::to_string_pretty(spec).map_err(|e| CliError::Run(e.to_string()))?;
    write_text(&out.join("testbed.json"), &(json + "\n"))?;
    if let Some(m) = &inst.model {
        write_text(&out.join("technologies.csv"), &m.tech_metadata_csv())?;
    }
    println!(
        "{}: {} variables, {} constraints, {} MGA variables",
        spec.name(),
        inst.lp.num_vars(),
        inst.lp.num_constraints(),
        inst.mga_vars.len()
    );
    Ok(())
}
