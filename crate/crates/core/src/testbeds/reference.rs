use crate::lp::{LinearProgram, Relation, Sense};
use crate::Scalar;

/// minimize x1 + 2 x2 + 2 x3
/// s.t. x1 + x2 + x3 >= 2, x1 <= 3, 2 x2 + 3 x3 <= 5, 0 <= x <= 10
pub fn reference_3d<T: Scalar>() -> LinearProgram<T> {
    let l = T::lit;
    let mut lp = LinearProgram::new(3, Sense::Minimize)
        .with_objective(vec![l(1.0), l(2.0), l(2.0)])
        .expect("three coefficients");
    let rows = [
        (
            vec![(0, l(1.0)), (1, l(1.0)), (2, l(1.0))],
            Relation::Ge,
            l(2.0),
        ),
        (vec![(0, l(1.0))], Relation::Le, l(3.0)),
        (vec![(1, l(2.0)), (2, l(3.0))], Relation::Le, l(5.0)),
    ];
    for (coeffs, rel, rhs) in rows {
        lp.add_constraint(coeffs, rel, rhs).expect("valid row");
    }
    lp.set_all_bounds(l(0.0), l(10.0)).expect("valid bounds");
    lp
}
