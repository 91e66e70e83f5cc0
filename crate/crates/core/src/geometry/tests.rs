use std::collections::HashMap;

use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

/// Jarvis march with exact orientation; area via shoelace. Independent of
/// the monotone chain under test.
fn gift_wrap_area(points: &[[f64; 2]]) -> f64 {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return 0.0;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let start = 0;
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        let mut next = (cur + 1) % pts.len();
        for i in 0..pts.len() {
            let c = cross(pts[cur], pts[next], pts[i]);
            let farther = c == 0.0 && {
                let d = |p: [f64; 2]| (p[0] - pts[cur][0]).powi(2) + (p[1] - pts[cur][1]).powi(2);
                d(pts[i]) > d(pts[next])
            };
            if c < 0.0 || farther {
                next = i;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        cur = next;
        if hull.len() > pts.len() {
            break;
        }
    }
    let mut a = 0.0;
    for k in 0..hull.len() {
        let p = pts[hull[k]];
        let q = pts[hull[(k + 1) % hull.len()]];
        a += p[0] * q[1] - p[1] * q[0];
    }
    (a / 2.0).abs()
}

/// Volume of a 3-D hull by fanning each facet to an interior point.
fn volume_3d(points: &[Vec<f64>], hull: &HullND<f64>) -> f64 {
    let n = hull.vertices().len() as f64;
    let c: Vec<f64> = (0..3)
        .map(|k| hull.vertices().iter().map(|&i| points[i][k]).sum::<f64>() / n)
        .collect();
    hull.facets()
        .iter()
        .map(|f| {
            let v: Vec<Vec<f64>> = f
                .vertices
                .iter()
                .map(|&i| (0..3).map(|k| points[i][k] - c[k]).collect())
                .collect();
            let det = v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1])
                - v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0])
                + v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
            det.abs() / 6.0
        })
        .sum()
}

fn cube() -> Vec<Vec<f64>> {
    (0..8)
        .map(|m| (0..3).map(|k| ((m >> k) & 1) as f64).collect())
        .collect()
}

fn dedup_normals(hull: &HullND<f64>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for f in hull.facets() {
        if !out
            .iter()
            .any(|n| n.iter().zip(&f.normal).map(|(a, b)| a * b).sum::<f64>() > 1.0 - 1e-9)
        {
            out.push(f.normal.clone());
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

fn check_hull(points: &[Vec<f64>], hull: &HullND<f64>) {
    for f in hull.facets() {
        assert_relative_eq!(
            f.normal.iter().map(|x| x * x).sum::<f64>(),
            1.0,
            epsilon = 1e-12
        );
        for q in points {
            assert!(
                f.distance(q) <= 1e-9,
                "point above facet by {}",
                f.distance(q)
            );
        }
        for &v in &f.vertices {
            assert!(f.distance(&points[v]).abs() <= 1e-9);
        }
    }
    // closed surface: every ridge is shared by exactly two facets
    let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
    for f in hull.facets() {
        for skip in 0..f.vertices.len() {
            let mut r = f.vertices.clone();
            r.remove(skip);
            *ridges.entry(r).or_default() += 1;
        }
    }
    assert!(ridges.values().all(|&c| c == 2), "open hull surface");
}

#[test]
fn square_and_triangle_areas() {
    let sq = hull_2d(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
    assert_eq!(sq.area(), 1.0);
    assert_eq!(sq.vertices()[0], [0.0, 0.0]);
    let tri = hull_2d(&[[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]).unwrap();
    assert_eq!(tri.area(), 6.0);
    assert_eq!(tri.vertices(), &[[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]);
}

#[test]
fn collinear_and_coincident_inputs_are_degenerate() {
    let line = hull_2d(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
    assert_eq!(line.area(), 0.0);
    assert!(line.is_degenerate());
    assert_eq!(line.vertices(), &[[0.0, 0.0], [2.0, 2.0]]);
    let dot = hull_2d(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
    assert_eq!(dot.vertices().len(), 1);
    assert!(matches!(hull_2d::<f64>(&[]), Err(GeometryError::Empty)));
    assert!(matches!(
        hull_2d(&[[0.0, f64::NAN]]),
        Err(GeometryError::NonFinite(0))
    ));
}

#[test]
fn collinear_edge_points_are_dropped() {
    let h = hull_2d(&[
        [0.0, 0.0],
        [1.0, 0.0],
        [2.0, 0.0],
        [2.0, 2.0],
        [0.0, 2.0],
        [1.0, 1.0],
    ])
    .unwrap();
    assert_eq!(h.vertices().len(), 4);
    assert_eq!(h.area(), 4.0);
}

#[test]
fn simplex_has_one_facet_per_vertex() {
    let pts = vec![
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, -1.0],
        vec![-1.0, 1.0, -1.0],
        vec![-1.0, -1.0, 1.0],
    ];
    let h = hull_nd(&pts, 3, DEFAULT_DIM_CAP).unwrap();
    assert_eq!(h.facets().len(), 4);
    check_hull(&pts, &h);
}

#[test]
fn cube_normals_are_the_axes() {
    let pts = cube();
    let h = hull_nd(&pts, 3, DEFAULT_DIM_CAP).unwrap();
    check_hull(&pts, &h);
    assert_eq!(h.vertices(), &[0, 1, 2, 3, 4, 5, 6, 7]);
    let mut axes = Vec::new();
    for k in 0..3 {
        for s in [-1.0, 1.0] {
            let mut e = vec![0.0; 3];
            e[k] = s;
            // brute force: the plane supports exactly four corners
            let off = if s > 0.0 { 1.0 } else { 0.0 };
            let on = pts
                .iter()
                .filter(|p| (p[k] * s - off).abs() < 1e-12)
                .count();
            assert_eq!(on, 4);
            axes.push(e);
        }
    }
    axes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let got = dedup_normals(&h);
    assert_eq!(got.len(), 6);
    for (g, a) in got.iter().zip(&axes) {
        for (x, y) in g.iter().zip(a) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn coplanar_points_are_degenerate() {
    let pts = vec![
        vec![0.0, 0.0, 1.0],
        vec![1.0, 0.0, 1.0],
        vec![0.0, 1.0, 1.0],
        vec![1.0, 1.0, 1.0],
        vec![0.5, 0.2, 1.0],
    ];
    assert!(matches!(
        hull_nd(&pts, 3, DEFAULT_DIM_CAP),
        Err(GeometryError::Degenerate { rank: 2, dim: 3 })
    ));
}

#[test]
fn dimension_cap_is_enforced() {
    let pts = vec![vec![0.0; 20]];
    assert!(matches!(
        hull_nd(&pts, 20, DEFAULT_DIM_CAP),
        Err(GeometryError::DimensionCap { dim: 20, cap: 10 })
    ));
}

#[test]
fn one_dimensional_hull_is_an_interval() {
    let pts = vec![vec![3.0], vec![-1.0], vec![0.5], vec![2.0]];
    let h = hull_nd(&pts, 1, DEFAULT_DIM_CAP).unwrap();
    assert_eq!(h.facets().len(), 2);
    assert_eq!(h.vertices(), &[0, 1]);
}

#[test]
fn hull_in_f32() {
    let pts: Vec<Vec<f32>> = cube()
        .into_iter()
        .map(|p| p.into_iter().map(|x| x as f32).collect())
        .collect();
    let h = hull_nd(&pts, 3, DEFAULT_DIM_CAP).unwrap();
    assert_eq!(h.vertices().len(), 8);
}

#[test]
fn random_hulls_support_and_close() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for dim in 2..=6 {
        for _ in 0..5 {
            let n = rng.random_range(dim + 1..40);
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect())
                .collect();
            let h = hull_nd(&pts, dim, DEFAULT_DIM_CAP).unwrap();
            check_hull(&pts, &h);
            // every direction's maximizer over all points is reached by a vertex
            for _ in 0..50 {
                let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                let score = |p: &Vec<f64>| p.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
                let best = pts.iter().map(score).fold(f64::MIN, f64::max);
                let best_v = h
                    .vertices()
                    .iter()
                    .map(|&i| score(&pts[i]))
                    .fold(f64::MIN, f64::max);
                assert!((best - best_v).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cube_shadow_sum_is_three() {
    let est = vesa(&cube(), 3).unwrap();
    assert_eq!(est.total(), 3.0);
    let areas: Vec<_> = est.pair_areas().collect();
    assert_eq!(areas, vec![((0, 1), 1.0), ((0, 2), 1.0), ((1, 2), 1.0)]);
}

#[test]
fn shadow_sum_edge_cases() {
    let one = vesa(&[vec![1.0, 2.0, 3.0]], 3).unwrap();
    assert_eq!(one.total(), 0.0);
    assert!(matches!(
        vesa::<f64>(&[], 1),
        Err(GeometryError::TooFewDims(1))
    ));
    assert!(matches!(
        vesa(&[vec![1.0, 2.0]], 3),
        Err(GeometryError::DimensionMismatch { .. })
    ));
    let mut est = VesaEstimate::<f64>::new(2).unwrap();
    assert_eq!(est.total(), 0.0);
    assert!(est.insert(&[1.0]).is_err());
}

#[test]
fn shadow_misses_growth_hidden_in_projections() {
    let mut pts = vec![
        vec![0.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ];
    let before_vol = volume_3d(&pts, &hull_nd(&pts, 3, 10).unwrap());
    let mut est = vesa(&pts, 3).unwrap();
    let before = est.total();
    let hidden = vec![0.4, 0.4, 0.4];
    assert_eq!(est.insert(&hidden).unwrap(), before);
    pts.push(hidden);
    let after_vol = volume_3d(&pts, &hull_nd(&pts, 3, 10).unwrap());
    assert_relative_eq!(before_vol, 1.0 / 6.0, epsilon = 1e-12);
    assert!(after_vol > before_vol + 0.01);
}

#[test]
fn convergence_examples() {
    let rule = |window| ConvergenceRule {
        window,
        ..ConvergenceRule::default()
    };
    assert_eq!(
        converged(&[1.0, 2.0, 3.0, 3.0, 3.0, 3.0], &rule(3)),
        Decision::Converged
    );
    assert_eq!(
        converged(&[1.0, 2.0, 4.0, 8.0, 16.0], &rule(2)),
        Decision::Continue
    );
    assert_eq!(
        converged(&[0.0; 12], &rule(10)),
        Decision::ConvergedZeroVolume
    );
    assert_eq!(converged(&[3.0; 10], &rule(10)), Decision::Continue);
    assert_eq!(converged(&[1.0, 1.005], &rule(1)), Decision::Converged);
    assert_eq!(converged(&[1.0, 1.02], &rule(1)), Decision::Continue);
}

fn point_set(dims: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dims), 1..30)
}

proptest! {
    #[test]
    fn monotone_chain_matches_gift_wrapping(
        pts in prop::collection::vec((-100i32..100, -100i32..100), 1..60)
    ) {
        let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x as f64 / 4.0, y as f64 / 4.0]).collect();
        let h = hull_2d(&pts).unwrap();
        prop_assert!((h.area() - gift_wrap_area(&pts)).abs() <= 1e-9);
        for p in &pts {
            prop_assert!(h.contains(*p));
        }
        let v = h.vertices();
        for w in v.iter().skip(1) {
            prop_assert!(v[0] < *w);
        }
        if v.len() >= 3 {
            for i in 0..v.len() {
                let (o, a, b) = (v[i], v[(i + 1) % v.len()], v[(i + 2) % v.len()]);
                prop_assert!((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]) > 0.0);
            }
        }
    }

    #[test]
    fn pair_areas_match_independent_hulls(pts in point_set(4)) {
        let est = vesa(&pts, 4).unwrap();
        let mut sum = 0.0;
        for ((i, j), area) in est.pair_areas() {
            let shadow: Vec<[f64; 2]> = pts.iter().map(|p| [p[i], p[j]]).collect();
            prop_assert_eq!(area, hull_2d(&shadow).unwrap().area());
            sum += area;
        }
        prop_assert!((est.total() - sum).abs() <= 1e-9 * sum.max(1.0));
    }

    #[test]
    fn two_dims_is_the_hull_area(pts in point_set(2)) {
        let est = vesa(&pts, 2).unwrap();
        let flat: Vec<[f64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
        prop_assert_eq!(est.total(), hull_2d(&flat).unwrap().area());
    }

    #[test]
    fn incremental_matches_batch_and_order(pts in point_set(3), seed in any::<u64>()) {
        let batch = vesa(&pts, 3).unwrap().total();
        let mut inc = VesaEstimate::new(3).unwrap();
        let mut last = 0.0;
        for p in &pts {
            let t = inc.insert(p).unwrap();
            prop_assert!(t >= last);
            last = t;
        }
        prop_assert!((inc.total() - batch).abs() <= 1e-9 * batch.max(1.0));

        let mut shuffled = pts.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.random_range(0..=i));
        }
        let perm = vesa(&shuffled, 3).unwrap().total();
        prop_assert!((perm - batch).abs() <= 1e-9 * batch.max(1.0));
    }
}

#[test]
fn monotone_under_many_insertions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut est = VesaEstimate::new(5).unwrap();
    let mut last = 0.0;
    let mut violations = 0;
    for _ in 0..1000 {
        let p: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
        let t = est.insert(&p).unwrap();
        if t < last {
            violations += 1;
        }
        last = t;
    }
    assert_eq!(violations, 0);
    assert!(last > 0.0);
}
