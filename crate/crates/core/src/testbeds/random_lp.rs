use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TestbedError;
use crate::lp::{LinearProgram, Relation, Sense};
use crate::Scalar;

/// `n` variables in `[0, 10]`, `2n` random covering rows `A_i x >= b_i`,
/// positive costs.
///
/// Costs are uniform on `(0.1, 1]`, coefficients uniform on `[0, 1)`, and
/// `b_i = u_i * Σ_j 10 A_ij` with `u_i` uniform on `[0.05, 0.5)`, so the
/// all-tens point is always feasible and every row cuts something off.
pub fn random_lp<T: Scalar>(n: usize, seed: u64) -> Result<LinearProgram<T>, TestbedError> {
    if n < 2 {
        return Err(TestbedError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<T> = (0..n)
        .map(|_| T::lit(1.0 - 0.9 * rng.random::<f64>()))
        .collect();
    let mut lp = LinearProgram::new(n, Sense::Minimize).with_objective(c)?;
    for _ in 0..2 * n {
        let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let u = rng.random_range(0.05..0.5);
        let b = u * a.iter().map(|v| 10.0 * v).sum::<f64>();
        let coeffs = a
            .into_iter()
            .enumerate()
            .filter(|&(_, v)| v != 0.0)
            .map(|(j, v)| (j, T::lit(v)))
            .collect();
        lp.add_constraint(coeffs, Relation::Ge, T::lit(b))?;
    }
    lp.set_all_bounds(T::zero(), T::lit(10.0))?;
    Ok(lp)
}
