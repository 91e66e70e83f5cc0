use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mga_cli::bundle::{load_bundle, read_report, SolutionLine};
use tempfile::TempDir;

fn mga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mga"))
        .args(args)
        .env_remove("MGA_WORKERS")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const REF_HSJ: &str =
    r#"{"testbed": {"kind": "reference3d"}, "method": {"name": "hsj"}, "iterations": 10}"#;

fn solutions(dir: &Path) -> Vec<SolutionLine> {
    csv::Reader::from_path(dir.join("solutions.csv"))
        .unwrap()
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn run_writes_a_consistent_bundle() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "ref_hsj.json", REF_HSJ);
    let out = tmp.path().join("out");
    let o = mga(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = read_report(&out).unwrap();
    assert_eq!(report.rows.len(), 10);
    let lines = solutions(&out);
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0].iteration, 0);
    assert_eq!(lines[0].method, "base");
    assert_eq!(
        lines.iter().filter(|l| l.unique_flag == 1).count(),
        report.summary.unique_count
    );
    let vesa = fs::read_to_string(out.join("vesa.csv")).unwrap();
    assert_eq!(vesa.lines().count(), 1 + report.summary.iterations);
    for f in [
        "metrics.csv",
        "pairwise_hulls.svg",
        "vesa_trajectory.svg",
        "runtime.svg",
    ] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let reloaded = load_bundle(&out).unwrap();
    assert_eq!(reloaded.summary, report.summary);
    assert_eq!(reloaded.rows, report.rows);
}

#[test]
fn figures_are_valid_stable_and_use_only_bundle_data() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"testbed": {"kind": "reference3d"}, "method": {"name": "random"}, "iterations": 20}"#,
    );
    let out = tmp.path().join("out");
    assert!(mga(&["run", "--config", &cfg, "-o", out.to_str().unwrap()])
        .status
        .success());
    let svg = fs::read_to_string(out.join("pairwise_hulls.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert_eq!(
        doc.descendants()
            .filter(|n| n.attribute("class") == Some("panel"))
            .count(),
        3
    );

    let points: Vec<Vec<f64>> = solutions(&out)
        .iter()
        .map(|l| l.mga_point.split(';').map(|t| t.parse().unwrap()).collect())
        .collect();
    let panels = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("panel"));
    for (k, panel) in panels.enumerate() {
        let (i, j) = [(0, 1), (0, 2), (1, 2)][k];
        for c in panel.descendants().filter(|n| n.has_tag_name("circle")) {
            let x: f64 = c.attribute("data-x").unwrap().parse().unwrap();
            let y: f64 = c.attribute("data-y").unwrap().parse().unwrap();
            assert!(
                points.iter().any(|p| p[i] == x && p[j] == y),
                "({x}, {y}) not in solutions.csv"
            );
        }
    }
    for f in ["vesa_trajectory.svg", "runtime.svg"] {
        let text = fs::read_to_string(out.join(f)).unwrap();
        roxmltree::Document::parse(&text).unwrap();
    }

    let again = tmp.path().join("again");
    let o = mga(&[
        "report",
        out.to_str().unwrap(),
        "--from-csv",
        "-o",
        again.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(again.join("pairwise_hulls.svg")).unwrap(),
        svg.as_bytes()
    );
    assert_eq!(
        fs::read(again.join("vesa_trajectory.svg")).unwrap(),
        fs::read(out.join("vesa_trajectory.svg")).unwrap()
    );
}

#[test]
fn overrides_and_env_workers() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"testbed": {"kind": "random_lp", "n": 5}, "method": {"name": "hsj"}, "iterations": 4}"#,
    );
    let out = tmp.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_mga"))
        .args(["run", "--config", &cfg, "-o", out.to_str().unwrap()])
        .args([
            "--method",
            "random",
            "--iterations",
            "7",
            "--seed",
            "9",
            "--slack",
            "0.2",
            "--workers",
            "1",
        ])
        .env("MGA_WORKERS", "3")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_report(&out).unwrap();
    assert_eq!(r.rows.len(), 7);
    assert_eq!(r.seed, 9);
    assert_eq!(r.config.workers, 3);
    assert_eq!(
        r.config.testbed,
        mga_core::testbeds::TestbedSpec::RandomLp { n: 5, seed: 9 }
    );
    assert_eq!(r.config.budget().amount, 0.2);
    assert_eq!(r.method, mga_core::methods::Method::Random);
}

#[test]
fn usage_errors_exit_one() {
    let tmp = TempDir::new().unwrap();
    let bad_key = write_config(
        tmp.path(),
        "a.json",
        r#"{"testbed": {"kind": "reference3d"}, "method": {"name": "hsj"}, "iteratons": 10}"#,
    );
    let o = mga(&["run", "--config", &bad_key]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("iteratons"), "{}", stderr(&o));

    let bad_type = write_config(
        tmp.path(),
        "b.json",
        r#"{"testbed": {"kind": "reference3d"}, "method": {"name": "hsj"}, "iterations": "ten"}"#,
    );
    let o = mga(&["run", "--config", &bad_type]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("iterations"), "{}", stderr(&o));

    assert_eq!(mga(&["run", "--bogus"]).status.code(), Some(1));
    assert_eq!(mga(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(mga(&["--help"]).status.code(), Some(0));

    let maa = write_config(
        tmp.path(),
        "m.json",
        r#"{"testbed": {"kind": "random_lp", "n": 20}, "method": {"name": "maa"}, "iterations": 5}"#,
    );
    let o = mga(&[
        "run",
        "--config",
        &maa,
        "-o",
        tmp.path().join("m").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("capped"));

    let cfg = write_config(tmp.path(), "r.json", REF_HSJ);
    let o = mga(&["run", "--config", &cfg, "--mode", "generation"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn run_failures_exit_two() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", REF_HSJ);
    // output path is an existing file, so the bundle cannot be written
    let blocker = tmp.path().join("blocker");
    fs::write(&blocker, "x").unwrap();
    let o = mga(&["run", "--config", &cfg, "-o", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn merge_is_a_union() {
    let tmp = TempDir::new().unwrap();
    // same testbed, two method seeds
    let run_seed = |seed: u64, name: &str| {
        let cfg = write_config(
            tmp.path(),
            &format!("{name}.json"),
            &format!(
                r#"{{"testbed": {{"kind": "random_lp", "n": 20, "seed": 4}}, "method": {{"name": "random"}}, "iterations": 15, "seeds": [{seed}]}}"#
            ),
        );
        let out = tmp.path().join(name);
        assert!(mga(&["run", "--config", &cfg, "-o", out.to_str().unwrap()])
            .status
            .success());
        out
    };
    let a = run_seed(4, "a");
    let b = run_seed(5, "b");
    let merged = tmp.path().join("merged");
    let o = mga(&[
        "merge",
        a.to_str().unwrap(),
        b.join("report.json").to_str().unwrap(),
        "-o",
        merged.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (ra, rb, rm) = (
        read_report(&a).unwrap(),
        read_report(&b).unwrap(),
        read_report(&merged).unwrap(),
    );
    assert_eq!(rm.rows.len(), 30);
    assert!(rm.summary.unique_count >= ra.summary.unique_count.max(rb.summary.unique_count));
    assert_eq!(load_bundle(&merged).unwrap().summary, rm.summary);

    let other = write_config(tmp.path(), "o.json", REF_HSJ);
    let c = tmp.path().join("c");
    assert!(mga(&["run", "--config", &other, "-o", c.to_str().unwrap()])
        .status
        .success());
    let o = mga(&[
        "merge",
        a.to_str().unwrap(),
        c.to_str().unwrap(),
        "-o",
        tmp.path().join("x").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn audit_dispatch_rows() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("audit");
    let o = mga(&[
        "audit-dispatch",
        "--mode",
        "generation",
        "--iterations",
        "20",
        "--seed",
        "3",
        "--workers",
        "4",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut rd = csv::Reader::from_path(out.join("audit.csv")).unwrap();
    let headers = rd.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "variable_cost_pct_error"));
    assert_eq!(rd.records().count(), 20);
}

#[test]
fn sweep_table() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "s.json",
        r#"[
            {"testbed": {"kind": "random_lp", "n": 10}, "method": {"name": "hsj"}, "iterations": 5, "seeds": [0, 1, 2]},
            {"testbed": {"kind": "random_lp", "n": 20}, "method": {"name": "maa"}, "iterations": 5}
        ]"#,
    );
    let o = mga(&["sweep", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rd.records().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[3].iter().any(|f| f.contains("capped")));
}

#[test]
fn solve_ref_and_gen_testbed() {
    let tmp = TempDir::new().unwrap();
    let o = mga(&["solve-ref", "-o", tmp.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("optimum 2 at [2.0, 0.0, 0.0]"));
    assert_eq!(
        fs::read_to_string(tmp.path().join("vertices.csv"))
            .unwrap()
            .lines()
            .count(),
        10
    );

    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for d in [&a, &b] {
        let o = mga(&[
            "gen-testbed",
            "--kind",
            "random-lp",
            "--n",
            "6",
            "--seed",
            "2",
            "-o",
            d.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(
        fs::read(a.join("model.lp")).unwrap(),
        fs::read(b.join("model.lp")).unwrap()
    );
    let c = tmp.path().join("c");
    let o = mga(&[
        "gen-testbed",
        "--kind",
        "toy-cem",
        "--mode",
        "generation",
        "-o",
        c.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fs::read_to_string(c.join("technologies.csv"))
        .unwrap()
        .starts_with("zone,technology"));
}

#[test]
fn report_overlay_and_var_selection() {
    let tmp = TempDir::new().unwrap();
    let mut dirs = Vec::new();
    for m in ["random", "minmax"] {
        let cfg = write_config(
            tmp.path(),
            &format!("{m}.json"),
            &format!(
                r#"{{"testbed": {{"kind": "reference3d"}}, "method": {{"name": "{m}"}}, "iterations": 20}}"#
            ),
        );
        let out = tmp.path().join(m);
        assert!(mga(&["run", "--config", &cfg, "-o", out.to_str().unwrap()])
            .status
            .success());
        dirs.push(out.to_str().unwrap().to_string());
    }
    let fig = tmp.path().join("fig");
    let o = mga(&[
        "report",
        &dirs[0],
        &dirs[1],
        "--vars",
        "x1,x3",
        "-o",
        fig.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = fs::read_to_string(fig.join("pairwise_hulls.svg")).unwrap();
    assert_eq!(svg.matches("class=\"panel\"").count(), 1);
    assert!(svg.contains(">random<") && svg.contains(">minmax<"));
    let traj = fs::read_to_string(fig.join("vesa_trajectory.svg")).unwrap();
    assert_eq!(traj.matches("class=\"series\"").count(), 2);
    let o = mga(&[
        "report",
        &dirs[0],
        "--vars",
        "x1,nope",
        "-o",
        fig.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
