use super::TestbedError;
use crate::lp::{LinearProgram, Relation};

pub const MAX_ORACLE_VARS: usize = 8;
pub const MAX_ORACLE_ROWS: usize = 25;

const DEDUP_TOL: f64 = 1e-7;

/// Every basic feasible solution, found by solving each square subsystem of
/// `num_vars` rows/bounds held at equality. Output is sorted and merged
/// within 1e-7 (L-infinity), so degenerate vertices appear once.
pub fn enumerate_vertices(lp: &LinearProgram<f64>) -> Result<Vec<Vec<f64>>, TestbedError> {
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in lp.constraints() {
        let mut a = vec![0.0; n];
        for &(j, v) in &c.coeffs {
            a[j] = v;
        }
        rows.push((a, c.rhs));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        rows.push((e.clone(), lp.lower_bounds()[j]));
        if lp.upper_bounds()[j].is_finite() {
            rows.push((e, lp.upper_bounds()[j]));
        }
    }
    if n == 0 || n > MAX_ORACLE_VARS || rows.len() > MAX_ORACLE_ROWS {
        return Err(TestbedError::OracleSize {
            vars: n,
            rows: rows.len(),
            max_vars: MAX_ORACLE_VARS,
            max_rows: MAX_ORACLE_ROWS,
        });
    }

    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        if let Some(x) = solve_square(&pick.iter().map(|&i| &rows[i]).collect::<Vec<_>>()) {
            if feasible(lp, &x) && !found.iter().any(|v| linf(v, &x) <= DEDUP_TOL) {
                found.push(x);
            }
        }
        if !next_combination(&mut pick, rows.len()) {
            break;
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(found)
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn feasible(lp: &LinearProgram<f64>, x: &[f64]) -> bool {
    let tol = 1e-7;
    lp.constraints().iter().all(|c| {
        let lhs = c.activity(x);
        match c.relation {
            Relation::Le => lhs <= c.rhs + tol,
            Relation::Ge => lhs >= c.rhs - tol,
            Relation::Eq => (lhs - c.rhs).abs() <= tol,
        }
    }) && x
        .iter()
        .enumerate()
        .all(|(j, &v)| v >= lp.lower_bounds()[j] - tol && v <= lp.upper_bounds()[j] + tol)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_square(rows: &[&(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut m: Vec<Vec<f64>> = rows
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.push(*b);
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())?;
        if m[p][c].abs() < 1e-10 {
            return None;
        }
        m.swap(c, p);
        for i in 0..n {
            if i != c {
                let f = m[i][c] / m[c][c];
                if f != 0.0 {
                    for k in c..=n {
                        m[i][k] -= f * m[c][k];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

fn next_combination(pick: &mut [usize], total: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < total - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
