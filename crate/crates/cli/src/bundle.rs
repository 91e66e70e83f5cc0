//! Report bundles on disk: `report.json`, `solutions.csv`, `metrics.csv`,
//! `vesa.csv` and the SVG figures.

use std::fs;
use std::path::{Path, PathBuf};

use mga_core::harness::{IterationRow, RunReport, Summary};
use serde::{Deserialize, Serialize};

use crate::figures::{self, FigureError, PointSeries, MAX_PANEL_VARS};
use crate::CliError;

pub const REPORT_JSON: &str = "report.json";
pub const SOLUTIONS_CSV: &str = "solutions.csv";
pub const METRICS_CSV: &str = "metrics.csv";
pub const VESA_CSV: &str = "vesa.csv";
pub const HULLS_SVG: &str = "pairwise_hulls.svg";
pub const TRAJECTORY_SVG: &str = "vesa_trajectory.svg";
pub const RUNTIME_SVG: &str = "runtime.svg";

/// One line of `solutions.csv`. Iteration 0 is the base optimum; vectors
/// are semicolon-joined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionLine {
    pub run_id: String,
    pub method: String,
    pub iteration: usize,
    pub formulate_ns: u64,
    pub solve_ns: u64,
    pub wall_ns: u64,
    pub cost: f64,
    pub unique_flag: u8,
    pub objective_vector: String,
    pub mga_point: String,
    pub facet: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VesaLine {
    pub iteration: usize,
    pub vesa_total: f64,
}

pub fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn split(s: &str) -> Result<Vec<f64>, CliError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Run(format!("bad number {t:?} in CSV")))
        })
        .collect()
}

pub fn run_id(r: &RunReport) -> String {
    format!("{}-{}-s{}", r.method, r.testbed, r.seed)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Run(format!("{}: {e}", path.display()))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Run(format!("{}: {e}", path.display()))
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    for r in rows {
        w.serialize(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize()
        .collect::<Result<_, _>>()
        .map_err(csv_err(path))
}

fn solution_lines(r: &RunReport) -> Vec<SolutionLine> {
    let id = run_id(r);
    let mut out = vec![SolutionLine {
        run_id: id.clone(),
        method: "base".into(),
        iteration: 0,
        formulate_ns: 0,
        solve_ns: 0,
        wall_ns: 0,
        cost: r.optimal_value,
        unique_flag: 0,
        objective_vector: String::new(),
        mga_point: join(&r.base_point),
        facet: None,
    }];
    out.extend(r.rows.iter().map(|row| SolutionLine {
        run_id: id.clone(),
        method: r.method.to_string(),
        iteration: row.iteration,
        formulate_ns: row.formulate_ns,
        solve_ns: row.solve_ns,
        wall_ns: row.wall_ns,
        cost: row.cost,
        unique_flag: row.unique as u8,
        objective_vector: join(&row.objective_vector),
        mga_point: join(&row.mga_point),
        facet: row.facet,
    }));
    out
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn metric_lines(r: &RunReport) -> Vec<(String, String)> {
    let s = &r.summary;
    let mut out: Vec<(String, String)> = [
        ("run_id", run_id(r)),
        ("method", r.method.to_string()),
        ("testbed", r.testbed.clone()),
        ("dims", r.dims.to_string()),
        ("seed", r.seed.to_string()),
        ("unique_count", s.unique_count.to_string()),
        ("iterations", s.iterations.to_string()),
        ("efficiency", s.efficiency.to_string()),
        ("vesa_final", s.vesa_final.to_string()),
        ("total_wall_ns", s.total_wall_ns.to_string()),
        ("formulate_ns_total", s.formulate_ns_total.to_string()),
        ("solve_ns_total", s.solve_ns_total.to_string()),
        ("mean_formulate_ns", r.mean_formulate_ns().to_string()),
        ("mean_solve_ns", r.mean_solve_ns().to_string()),
        ("converged_at", opt(&s.converged_at)),
        ("terminated", opt(&s.terminated)),
        ("budget_violations", s.budget_violations.to_string()),
        ("duplicate_objectives", s.duplicate_objectives.to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    out.extend(
        s.warnings
            .iter()
            .map(|w| ("warning".to_string(), w.clone())),
    );
    out
}

/// Write every bundle file. Figures that cannot be drawn (too few points,
/// too many variables) are skipped and reported back as warnings.
pub fn write_bundle(dir: &Path, r: &RunReport) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(REPORT_JSON);
    let json = serde_json::to_string_pretty(r).map_err(|e| CliError::Run(e.to_string()))?;
    fs::write(&path, json + "\n").map_err(io_err(&path))?;
    write_csv(&dir.join(SOLUTIONS_CSV), &solution_lines(r))?;
    let metrics: Vec<_> = metric_lines(r);
    let path = dir.join(METRICS_CSV);
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    w.write_record(["key", "value"]).map_err(csv_err(&path))?;
    for (k, v) in &metrics {
        w.write_record([k, v]).map_err(csv_err(&path))?;
    }
    w.flush().map_err(io_err(&path))?;
    let vesa: Vec<VesaLine> = r
        .rows
        .iter()
        .map(|row| VesaLine {
            iteration: row.iteration,
            vesa_total: row.vesa_total,
        })
        .collect();
    write_csv(&dir.join(VESA_CSV), &vesa)?;
    write_figures(dir, std::slice::from_ref(r), None)
}

/// Figures for one or more reports over the same MGA variables.
pub fn write_figures(
    dir: &Path,
    reports: &[RunReport],
    vars: Option<&[usize]>,
) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut warnings = Vec::new();
    let first = reports
        .first()
        .ok_or_else(|| CliError::Usage("no reports given".into()))?;
    let all: Vec<usize>;
    let vars = match vars {
        Some(v) => v,
        None if first.dims <= MAX_PANEL_VARS => {
            all = (0..first.dims).collect();
            &all
        }
        None => {
            all = Vec::new();
            warnings.push(format!(
                "{HULLS_SVG} skipped: {} variables exceeds the {MAX_PANEL_VARS}-panel limit; pick some with --vars",
                first.dims
            ));
            &all
        }
    };
    if !vars.is_empty() {
        let series: Vec<PointSeries> = reports
            .iter()
            .map(|r| PointSeries {
                name: series_name(r, reports),
                points: r.unique_points(),
                base: Some(r.base_point.clone()),
            })
            .collect();
        match figures::pairwise_hulls(&series, &first.labels, vars) {
            Ok(svg) => write(dir, HULLS_SVG, &svg)?,
            Err(e @ FigureError::TooFewPoints(..)) => {
                warnings.push(format!("{HULLS_SVG} skipped: {e}"))
            }
            Err(e) => return Err(CliError::Usage(e.to_string())),
        }
    }
    let traj: Vec<(String, Vec<f64>)> = reports
        .iter()
        .map(|r| (series_name(r, reports), r.vesa_trajectory()))
        .collect();
    match figures::trajectories(&traj) {
        Ok(svg) => write(dir, TRAJECTORY_SVG, &svg)?,
        Err(e) => warnings.push(format!("{TRAJECTORY_SVG} skipped: {e}")),
    }
    let bars: Vec<(String, f64, f64)> = reports
        .iter()
        .map(|r| {
            (
                series_name(r, reports),
                r.mean_formulate_ns(),
                r.mean_solve_ns(),
            )
        })
        .collect();
    write(
        dir,
        RUNTIME_SVG,
        &figures::runtime_bars(&bars).map_err(|e| CliError::Run(e.to_string()))?,
    )?;
    Ok(warnings)
}

/// Method name, plus the seed when several reports share a method.
fn series_name(r: &RunReport, all: &[RunReport]) -> String {
    if all.iter().filter(|o| o.method == r.method).count() > 1 {
        format!("{} s{}", r.method, r.seed)
    } else {
        r.method.to_string()
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(io_err(&path))
}

/// `report.json` itself, or the one inside a bundle directory.
pub fn report_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join(REPORT_JSON)
    } else {
        p.to_path_buf()
    }
}

pub fn read_report(p: &Path) -> Result<RunReport, CliError> {
    let path = report_path(p);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Rebuild a report from the CSV files, taking only run metadata from
/// `report.json`. Per-iteration data and the summary come from the CSVs.
pub fn load_bundle(dir: &Path) -> Result<RunReport, CliError> {
    let mut r = read_report(dir)?;
    let lines: Vec<SolutionLine> = read_csv(&dir.join(SOLUTIONS_CSV))?;
    let vesa: Vec<VesaLine> = read_csv(&dir.join(VESA_CSV))?;
    let (base, rest): (Vec<_>, Vec<_>) = lines.into_iter().partition(|l| l.iteration == 0);
    let base = base
        .first()
        .ok_or_else(|| CliError::Run(format!("{SOLUTIONS_CSV} has no base row")))?;
    if rest.len() != vesa.len() {
        return Err(CliError::Run(format!(
            "{SOLUTIONS_CSV} has {} iterations but {VESA_CSV} has {}",
            rest.len(),
            vesa.len()
        )));
    }
    r.base_point = split(&base.mga_point)?;
    r.rows = rest
        .iter()
        .zip(&vesa)
        .map(|(l, v)| {
            Ok(IterationRow {
                iteration: l.iteration,
                formulate_ns: l.formulate_ns,
                solve_ns: l.solve_ns,
                wall_ns: l.wall_ns,
                unique: l.unique_flag == 1,
                vesa_total: v.vesa_total,
                cost: l.cost,
                objective_vector: split(&l.objective_vector)?,
                mga_point: split(&l.mga_point)?,
                facet: l.facet,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let metrics = read_metrics(&dir.join(METRICS_CSV))?;
    let get = |k: &str| {
        metrics
            .iter()
            .find(|(key, _)| key == k)
            .map(|(_, v)| v.as_str())
            .unwrap_or("")
    };
    let parse_opt = |k: &str| -> Result<Option<usize>, CliError> {
        match get(k) {
            "" => Ok(None),
            v => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Run(format!("bad {k} in {METRICS_CSV}"))),
        }
    };
    r.summary = Summary {
        converged_at: parse_opt("converged_at")?,
        terminated: Some(get("terminated").to_string()).filter(|s| !s.is_empty()),
        duplicate_objectives: parse_opt("duplicate_objectives")?.unwrap_or(0),
        warnings: metrics
            .iter()
            .filter(|(k, _)| k == "warning")
            .map(|(_, v)| v.clone())
            .collect(),
        ..r.summary
    };
    r.refresh();
    Ok(r)
}

fn read_metrics(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let mut rd = csv::Reader::from_path(path).map_err(csv_err(path))?;
    rd.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err(path))?;
            Ok((
                rec.get(0).unwrap_or("").to_string(),
                rec.get(1).unwrap_or("").to_string(),
            ))
        })
        .collect()
}
