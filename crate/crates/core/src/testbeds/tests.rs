use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use super::*;
use crate::lp::text::write_lp;
use crate::lp::{make_mga_problem, solve, solve_with_objective, Relation, Sense, Status};

fn reference_region() -> LinearProgram<f64> {
    let lp = reference_3d::<f64>();
    let opt = solve(&lp).unwrap();
    make_mga_problem(&lp, &opt, BudgetSpec::absolute(3.0), &[0, 1, 2])
        .unwrap()
        .lp()
        .clone()
}

fn near(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn reference_problem_shape_and_points() {
    let lp = reference_3d::<f64>();
    assert_eq!(lp.num_vars(), 3);
    assert_eq!(lp.num_constraints(), 3);
    assert_eq!(lp.objective(), &[1.0, 2.0, 2.0]);
    let sol = solve(&lp).unwrap();
    assert_abs_diff_eq!(sol.objective_value, 2.0, epsilon = 1e-9);
    assert!(near(&sol.values, &[2.0, 0.0, 0.0], 1e-9));
    assert!(lp.is_feasible(&[0.0, 2.5, 0.0], 1e-9));
    assert_eq!(lp.objective_value(&[0.0, 2.5, 0.0]), 5.0);
    assert!(!lp.is_feasible(&[0.0, 0.0, 2.0], 1e-9));
}

#[test]
fn random_lp_structure() {
    let lp = random_lp::<f64>(5, 7).unwrap();
    assert_eq!(lp.num_vars(), 5);
    assert_eq!(lp.num_constraints(), 10);
    assert!(lp.constraints().iter().all(|c| c.relation == Relation::Ge));
    assert!(lp.lower_bounds().iter().all(|&v| v == 0.0));
    assert!(lp.upper_bounds().iter().all(|&v| v == 10.0));
    assert!(lp.objective().iter().all(|&c| c > 0.1 && c <= 1.0));
    assert_eq!(lp.sense(), Sense::Minimize);
    assert!(matches!(
        random_lp::<f64>(1, 0),
        Err(TestbedError::TooSmall(1))
    ));
}

#[test]
fn random_lp_is_deterministic() {
    let a = write_lp(&random_lp::<f64>(8, 3).unwrap());
    let b = write_lp(&random_lp::<f64>(8, 3).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, write_lp(&random_lp::<f64>(8, 4).unwrap()));
    let f32_lp = random_lp::<f32>(8, 3).unwrap();
    assert_eq!(solve(&f32_lp).unwrap().status, Status::Optimal);
}

proptest! {
    #[test]
    fn random_lp_all_tens_feasible_and_solvable(n in 2usize..25, seed in any::<u64>()) {
        let lp = random_lp::<f64>(n, seed).unwrap();
        for c in lp.constraints() {
            let lhs = c.activity(&vec![10.0; n]);
            prop_assert!(lhs >= c.rhs);
            prop_assert!(c.rhs > 0.0);
        }
        let sol = solve(&lp).unwrap();
        prop_assert_eq!(sol.status, Status::Optimal);
        prop_assert!(lp.max_violation(&sol.values) <= 1e-6);
    }

    #[test]
    fn simplex_agrees_with_vertex_oracle(
        n in 2usize..5,
        seed in any::<u64>(),
        w in prop::collection::vec(-1.0f64..1.0, 4),
    ) {
        let lp = random_lp::<f64>(n, seed).unwrap();
        let opt = solve(&lp).unwrap();
        let p = make_mga_problem(&lp, &opt, BudgetSpec::relative(0.1), &(0..n).collect::<Vec<_>>()).unwrap();
        let verts = enumerate_vertices(p.lp()).unwrap();
        let score = |x: &[f64]| x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        let best = verts.iter().map(|v| score(v)).fold(f64::INFINITY, f64::min);
        let sol = solve_with_objective(&p, &w[..n]).unwrap();
        prop_assert!((sol.objective_value - best).abs() <= 1e-6 * best.abs().max(1.0));
        prop_assert!(verts.iter().any(|v| near(v, &sol.values, 1e-6)));
    }
}

#[test]
fn oracle_on_unit_box() {
    let mut lp = LinearProgram::<f64>::new(2, Sense::Minimize);
    lp.set_all_bounds(0.0, 1.0).unwrap();
    let v = enumerate_vertices(&lp).unwrap();
    assert_eq!(
        v,
        vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0]
        ]
    );
}

#[test]
fn oracle_on_reference_region() {
    let v = enumerate_vertices(&reference_region()).unwrap();
    let named = [
        [2.0, 0.0, 0.0],
        [3.0, 0.0, 0.0],
        [0.0, 2.0, 0.0],
        [0.0, 2.5, 0.0],
        [0.0, 1.0, 1.0],
        [1.0 / 3.0, 0.0, 5.0 / 3.0],
    ];
    for p in &named {
        assert!(v.iter().any(|q| near(q, p, 1e-9)), "missing {p:?}");
    }
    // hand-derived: the six above plus three corners on the budget plane
    let extra = [
        [3.0, 1.0, 0.0],
        [3.0, 0.0, 1.0],
        [5.0 / 3.0, 0.0, 5.0 / 3.0],
    ];
    for p in &extra {
        assert!(v.iter().any(|q| near(q, p, 1e-9)), "missing {p:?}");
    }
    assert_eq!(v.len(), 9);
}

#[test]
fn oracle_size_guard() {
    let lp = random_lp::<f64>(9, 0).unwrap();
    assert!(matches!(
        enumerate_vertices(&lp),
        Err(TestbedError::OracleSize { vars: 9, .. })
    ));
    let lp = random_lp::<f64>(7, 0).unwrap();
    assert!(matches!(
        enumerate_vertices(&lp),
        Err(TestbedError::OracleSize { rows: 28, .. })
    ));
}

#[test]
fn cem_default_model() {
    let spec = CemSpec::default();
    let model = CapacityModel::new(&spec).unwrap();
    let lp = model.lp();
    assert_eq!(lp.num_vars(), 12 + 2 + 12 * 72 + 4 * 72 + 12);
    assert_eq!(lp.num_constraints(), 3 * 72 + 12 * 72 + 4 * 72 + 12);
    assert_eq!(model.select_mga_vars(MgaMode::Capacity).len(), 14);
    assert_eq!(model.select_mga_vars(MgaMode::Generation).len(), 12);
    assert_eq!(spec.mga_dimension(), 14);
    let gen_vars = model.select_mga_vars(MgaMode::Generation);
    let cap_vars = model.select_mga_vars(MgaMode::Capacity);
    for t in 0..72 {
        let j = model.gen_index(1, 2, t);
        assert!(!gen_vars.contains(&j) && !cap_vars.contains(&j));
    }
    assert_eq!(model.var_name(model.cap_index(2, 1)), "cap_z2_solar");
    assert_eq!(model.var_name(model.tcap_index(1)), "tcap_z1_z2");
    assert_eq!(
        model.var_name(model.gen_index(0, 3, 5)),
        "gen_z0_offshore_wind_h5"
    );
    assert_eq!(model.var_name(model.flow_index(0, 1, 7)), "flow_z1_z0_h7");
    assert_eq!(model.var_name(model.annual_index(1, 0)), "gen_total_z1_gas");

    let sol = solve(lp).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    assert!(lp.max_violation(&sol.values) <= 1e-6);
    assert!(model.balance_residual(&sol.values) <= 1e-6);
    let served: f64 = (0..3)
        .flat_map(|z| (0..4).map(move |g| (z, g)))
        .map(|(z, g)| sol.values[model.annual_index(z, g)])
        .sum();
    assert!(served >= model.total_demand() - 1e-6);

    let audit = model.redispatch_audit(&sol.values).unwrap();
    assert!(audit.variable_cost_pct_error.unwrap().abs() <= 1e-6);
    assert!(audit.variable_cost_redispatch <= audit.variable_cost_mga + 1e-6);
}

#[test]
fn cem_is_deterministic_per_seed() {
    let a = CapacityModel::new(&CemSpec::default()).unwrap();
    let b = CapacityModel::new(&CemSpec::default()).unwrap();
    assert_eq!(a.lp(), b.lp());
    let c = CapacityModel::new(&CemSpec {
        seed: 1,
        ..CemSpec::default()
    })
    .unwrap();
    assert_ne!(a.lp(), c.lp());
}

#[test]
fn cem_zero_demand_builds_nothing() {
    let spec = CemSpec {
        demand_scale: 0.0,
        hours: 24,
        ..CemSpec::default()
    };
    let model = CapacityModel::new(&spec).unwrap();
    let sol = solve(model.lp()).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    assert_abs_diff_eq!(sol.objective_value, 0.0, epsilon = 1e-9);
    for j in model.select_mga_vars(MgaMode::Capacity) {
        assert_abs_diff_eq!(sol.values[j], 0.0, epsilon = 1e-9);
    }
    let audit = model.redispatch_audit(&sol.values).unwrap();
    assert_eq!(audit.variable_cost_pct_error, None);
}

#[test]
fn cem_rejects_bad_parameters() {
    let tiny = CemSpec {
        max_build: Some(10.0),
        ..CemSpec::default()
    };
    assert!(matches!(
        CapacityModel::new(&tiny),
        Err(TestbedError::DemandExceedsBuildable { .. })
    ));
    for spec in [
        CemSpec {
            zones: 1,
            ..CemSpec::default()
        },
        CemSpec {
            hours: 12,
            ..CemSpec::default()
        },
        CemSpec {
            hours: 400,
            ..CemSpec::default()
        },
        CemSpec {
            demand_scale: -1.0,
            ..CemSpec::default()
        },
    ] {
        assert!(matches!(
            CapacityModel::new(&spec),
            Err(TestbedError::BadCem(_))
        ));
    }
    let model = CapacityModel::new(&CemSpec {
        hours: 24,
        ..CemSpec::default()
    })
    .unwrap();
    assert!(matches!(
        model.redispatch_audit(&[0.0; 3]),
        Err(TestbedError::SolutionLength { .. })
    ));
}

#[test]
fn cem_metadata_csv() {
    let model = CapacityModel::new(&CemSpec {
        hours: 24,
        ..CemSpec::default()
    })
    .unwrap();
    let csv = model.tech_metadata_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 12);
    assert_eq!(
        lines[0],
        "zone,technology,fixed_cost,variable_cost,emissions_rate"
    );
    assert_eq!(lines[1], "0,gas,90000,40,0.4");
}

#[test]
fn testbed_specs_build() {
    let spec: TestbedSpec =
        serde_json::from_str(r#"{"kind": "random_lp", "n": 6, "seed": 2}"#).unwrap();
    assert_eq!(spec.dimension(), 6);
    let inst = spec.build().unwrap();
    assert_eq!(inst.mga_vars.len(), 6);
    assert_eq!(inst.labels[0], "x1");
    assert_eq!(spec.with_seed(9).seed(), 9);
    assert_eq!(spec.default_budget(), BudgetSpec::relative(0.1));

    let r: TestbedSpec = serde_json::from_str(r#"{"kind": "reference3d"}"#).unwrap();
    assert_eq!(r.default_budget(), BudgetSpec::absolute(3.0));
    assert_eq!(r.build().unwrap().lp, reference_3d());

    let c: TestbedSpec =
        serde_json::from_str(r#"{"kind": "toy_cem", "hours": 24, "mode": "generation"}"#).unwrap();
    assert_eq!(c.dimension(), 12);
    let inst = c.build().unwrap();
    assert_eq!(inst.mga_vars.len(), 12);
    assert!(inst.model.is_some());
    assert!(inst.labels[0].starts_with("gen_total_z0"));

    assert!(
        serde_json::from_str::<TestbedSpec>(r#"{"kind": "random_lp", "n": 3, "sede": 1}"#).is_err()
    );
}
