use super::{Method, MethodError, ObjectiveVector, RandomVector};
use crate::geometry::{hull_nd, HullND, DEFAULT_DIM_CAP};
use crate::scalar::{dot, norm};
use crate::Scalar;

pub const DEFAULT_ANGLE_TOL_DEG: f64 = 1.0;

/// Number of affinely independent directions spanned by `points`.
pub fn affine_rank<T: Scalar>(points: &[Vec<T>]) -> usize {
    let Some(origin) = points.first() else {
        return 0;
    };
    let scale = points
        .iter()
        .flatten()
        .fold(T::one(), |m, &x| m.max(x.abs()));
    let tol = scale * T::FEAS_TOL * T::lit(1e-3);
    let mut basis: Vec<Vec<T>> = Vec::new();
    for p in &points[1..] {
        let mut r: Vec<T> = p.iter().zip(origin).map(|(&a, &b)| a - b).collect();
        // two Gram-Schmidt passes keep the residual honest
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&r, q);
                for (x, &y) in r.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let d = norm(&r);
        if d > tol {
            for x in &mut r {
                *x /= d;
            }
            basis.push(r);
            if basis.len() == origin.len() {
                break;
            }
        }
    }
    basis.len()
}

/// Grow the starting set with random-direction solves until it spans all
/// `dim` dimensions. `solve` returns the MGA projection for one objective.
/// Returns every point gathered, starting with `base`.
pub fn maa_init<T, E>(
    base: &[T],
    random: &mut RandomVector,
    max_iters: usize,
    mut solve: impl FnMut(ObjectiveVector<T>) -> Result<Vec<T>, E>,
) -> Result<Vec<Vec<T>>, E>
where
    T: Scalar,
    E: From<MethodError>,
{
    let dim = base.len();
    let mut points = vec![base.to_vec()];
    let mut rank = 0;
    for it in 1..=max_iters {
        if rank == dim {
            break;
        }
        let mut v = random.propose(dim, it)?;
        v.method = Method::Maa;
        points.push(solve(v)?);
        rank = affine_rank(&points);
    }
    if rank < dim {
        return Err(MethodError::InitRank {
            rank,
            dim,
            iterations: points.len() - 1,
        }
        .into());
    }
    Ok(points)
}

/// Facet-normal objectives over the hull of the points found so far.
#[derive(Debug, Clone)]
pub struct Maa<T> {
    min_cos: T,
    dim_cap: usize,
    used: Vec<Vec<T>>,
}

impl<T: Scalar> Default for Maa<T> {
    fn default() -> Self {
        Maa::new(DEFAULT_ANGLE_TOL_DEG, DEFAULT_DIM_CAP)
    }
}

impl<T: Scalar> Maa<T> {
    /// Normals closer than `angle_tol_deg` to an earlier one are dropped.
    pub fn new(angle_tol_deg: f64, dim_cap: usize) -> Self {
        Maa {
            min_cos: T::lit(angle_tol_deg.to_radians().cos()),
            dim_cap,
            used: Vec::new(),
        }
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    /// Outward unit normals issued so far.
    pub fn used_normals(&self) -> &[Vec<T>] {
        &self.used
    }

    pub fn hull(&self, points: &[Vec<T>]) -> Result<HullND<T>, MethodError> {
        let dim = points.first().map_or(0, |p| p.len());
        if dim == 0 {
            return Err(MethodError::NoDimensions);
        }
        Ok(hull_nd(points, dim, self.dim_cap)?)
    }

    /// One stage: hull the points, keep the facet normals not yet used,
    /// and return them negated (maximize outward) in lexicographic order of
    /// the normal. Empty when every facet direction has been tried.
    pub fn propose(
        &mut self,
        points: &[Vec<T>],
        first_iteration: usize,
    ) -> Result<Vec<ObjectiveVector<T>>, MethodError> {
        let hull = self.hull(points)?;
        Ok(self.propose_from_hull(&hull, first_iteration))
    }

    pub fn propose_from_hull(
        &mut self,
        hull: &HullND<T>,
        first_iteration: usize,
    ) -> Vec<ObjectiveVector<T>> {
        let mut order: Vec<usize> = (0..hull.facets().len()).collect();
        order.sort_by(|&a, &b| {
            let (na, nb) = (&hull.facets()[a].normal, &hull.facets()[b].normal);
            na.partial_cmp(nb).unwrap().then(a.cmp(&b))
        });
        let mut out = Vec::new();
        for f in order {
            let normal = &hull.facets()[f].normal;
            if self.used.iter().any(|u| dot(u, normal) >= self.min_cos) {
                continue;
            }
            self.used.push(normal.clone());
            let weights = normal.iter().map(|&x| -x).collect();
            let mut v = ObjectiveVector::new(weights, Method::Maa, first_iteration + out.len());
            v.facet = Some(f);
            out.push(v);
        }
        out
    }
}
