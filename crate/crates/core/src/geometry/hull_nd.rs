use std::collections::HashMap;

use super::GeometryError;
use crate::scalar::{dot, norm};
use crate::Scalar;

/// Hull dimension above which [`hull_nd`] refuses to run unless the caller
/// raises the cap explicitly.
pub const DEFAULT_DIM_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Facet<T> {
    /// Outward unit normal.
    pub normal: Vec<T>,
    /// `normal · v` for any vertex `v` of the facet.
    pub offset: T,
    /// Indices into the input points, sorted.
    pub vertices: Vec<usize>,
}

impl<T: Scalar> Facet<T> {
    pub fn distance(&self, p: &[T]) -> T {
        dot(&self.normal, p) - self.offset
    }
}

/// Simplicial facets of the convex hull of a point set. Coplanar facets are
/// not merged.
#[derive(Debug, Clone)]
pub struct HullND<T> {
    dim: usize,
    facets: Vec<Facet<T>>,
    vertices: Vec<usize>,
    tolerance: T,
}

impl<T: Scalar> HullND<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    /// Indices of input points that are hull vertices, sorted.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Distance below which a point counts as lying on a facet plane.
    pub fn tolerance(&self) -> T {
        self.tolerance
    }
}

/// Incremental quickhull.
pub fn hull_nd<T: Scalar>(
    points: &[Vec<T>],
    dim: usize,
    cap: usize,
) -> Result<HullND<T>, GeometryError> {
    if dim > cap {
        return Err(GeometryError::DimensionCap { dim, cap });
    }
    if points.is_empty() {
        return Err(GeometryError::Empty);
    }
    let mut scale = T::one();
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        for &x in p {
            if !x.is_finite() {
                return Err(GeometryError::NonFinite(i));
            }
            scale = scale.max(x.abs());
        }
    }
    let tol = scale * T::epsilon() * T::lit(1024.0);

    let simplex = initial_simplex(points, dim, tol)?;
    let interior: Vec<T> = (0..dim)
        .map(|k| simplex.iter().map(|&i| points[i][k]).sum::<T>() / T::lit((dim + 1) as f64))
        .collect();

    let mut b = Builder {
        points,
        interior,
        tol,
        facets: Vec::new(),
        alive: Vec::new(),
        outside: Vec::new(),
    };
    for skip in 0..=dim {
        let mut verts: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &i)| i)
            .collect();
        verts.sort_unstable();
        b.push_facet(verts)?;
    }
    let unassigned: Vec<usize> = (0..points.len()).filter(|i| !simplex.contains(i)).collect();
    let all: Vec<usize> = (0..b.facets.len()).collect();
    b.assign(&unassigned, &all);

    while let Some(f) = (0..b.facets.len()).find(|&f| b.alive[f] && !b.outside[f].is_empty()) {
        let apex = *b.outside[f]
            .iter()
            .max_by(|&&a, &&c| {
                let da = b.facets[f].distance(&points[a]);
                let dc = b.facets[f].distance(&points[c]);
                da.partial_cmp(&dc).unwrap().then(c.cmp(&a))
            })
            .unwrap();
        let visible: Vec<usize> = (0..b.facets.len())
            .filter(|&g| b.alive[g] && b.facets[g].distance(&points[apex]) > tol)
            .collect();

        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut order: Vec<Vec<usize>> = Vec::new();
        for &g in &visible {
            let v = &b.facets[g].vertices;
            for skip in 0..v.len() {
                let ridge: Vec<usize> = v
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &i)| i)
                    .collect();
                let count = ridges.entry(ridge.clone()).or_insert(0);
                if *count == 0 {
                    order.push(ridge);
                }
                *count += 1;
            }
        }

        let mut orphans = Vec::new();
        for &g in &visible {
            b.alive[g] = false;
            orphans.extend(std::mem::take(&mut b.outside[g]));
        }
        orphans.retain(|&p| p != apex);
        orphans.sort_unstable();
        orphans.dedup();

        let first_new = b.facets.len();
        for ridge in order {
            if ridges[&ridge] != 1 {
                continue;
            }
            let mut verts = ridge;
            verts.push(apex);
            verts.sort_unstable();
            b.push_facet(verts)?;
        }
        let candidates: Vec<usize> = (first_new..b.facets.len())
            .chain((0..first_new).filter(|&g| b.alive[g]))
            .collect();
        b.assign(&orphans, &candidates);
    }

    let mut facets = Vec::new();
    let mut vertices = Vec::new();
    for (f, alive) in b.facets.into_iter().zip(b.alive) {
        if alive {
            vertices.extend_from_slice(&f.vertices);
            facets.push(f);
        }
    }
    vertices.sort_unstable();
    vertices.dedup();
    Ok(HullND {
        dim,
        facets,
        vertices,
        tolerance: tol,
    })
}

struct Builder<'a, T> {
    points: &'a [Vec<T>],
    interior: Vec<T>,
    tol: T,
    facets: Vec<Facet<T>>,
    alive: Vec<bool>,
    outside: Vec<Vec<usize>>,
}

impl<T: Scalar> Builder<'_, T> {
    fn push_facet(&mut self, vertices: Vec<usize>) -> Result<(), GeometryError> {
        let dim = self.interior.len();
        let base = &self.points[vertices[0]];
        let rows: Vec<Vec<T>> = vertices[1..]
            .iter()
            .map(|&i| (0..dim).map(|k| self.points[i][k] - base[k]).collect())
            .collect();
        let mut normal =
            null_vector(rows, dim).ok_or(GeometryError::Degenerate { rank: dim - 1, dim })?;
        let len = norm(&normal);
        for x in &mut normal {
            *x /= len;
        }
        let mut offset = dot(&normal, base);
        if dot(&normal, &self.interior) > offset {
            for x in &mut normal {
                *x = -*x;
            }
            offset = -offset;
        }
        self.facets.push(Facet {
            normal,
            offset,
            vertices,
        });
        self.alive.push(true);
        self.outside.push(Vec::new());
        Ok(())
    }

    /// Give each point to the first candidate facet it lies strictly above;
    /// points above none are interior and dropped.
    fn assign(&mut self, pts: &[usize], candidates: &[usize]) {
        for &p in pts {
            if let Some(&f) = candidates
                .iter()
                .find(|&&f| self.facets[f].distance(&self.points[p]) > self.tol)
            {
                self.outside[f].push(p);
            }
        }
    }
}

/// Greedy choice of `dim + 1` points spanning the space: each next point is
/// the one farthest from the affine span of those already chosen.
fn initial_simplex<T: Scalar>(
    points: &[Vec<T>],
    dim: usize,
    tol: T,
) -> Result<Vec<usize>, GeometryError> {
    let first = (0..points.len())
        .min_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap())
        .unwrap();
    let origin = &points[first];
    let mut chosen = vec![first];
    let mut basis: Vec<Vec<T>> = Vec::new();
    while chosen.len() <= dim {
        let mut best: Option<(usize, T, Vec<T>)> = None;
        for (i, p) in points.iter().enumerate() {
            let mut r: Vec<T> = p.iter().zip(origin).map(|(&a, &b)| a - b).collect();
            for q in &basis {
                let c = dot(&r, q);
                for (x, &y) in r.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
            let d = norm(&r);
            if best.as_ref().is_none_or(|(_, bd, _)| d > *bd) {
                best = Some((i, d, r));
            }
        }
        let (i, d, mut r) = best.unwrap();
        if d <= tol {
            return Err(GeometryError::Degenerate {
                rank: basis.len(),
                dim,
            });
        }
        for x in &mut r {
            *x /= d;
        }
        basis.push(r);
        chosen.push(i);
    }
    Ok(chosen)
}

/// A nonzero vector orthogonal to every row, if the rows have rank
/// `dim - 1`.
fn null_vector<T: Scalar>(mut rows: Vec<Vec<T>>, dim: usize) -> Option<Vec<T>> {
    let scale = rows
        .iter()
        .flatten()
        .fold(T::zero(), |m, &x| m.max(x.abs()));
    let tiny = scale * T::epsilon() * T::lit(64.0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        if r == rows.len() {
            break;
        }
        let p = (r..rows.len())
            .max_by(|&a, &b| rows[a][c].abs().partial_cmp(&rows[b][c].abs()).unwrap())
            .unwrap();
        if rows[p][c].abs() <= tiny {
            continue;
        }
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][c] / rows[r][c];
                if f != T::zero() {
                    for k in c..dim {
                        let v = rows[r][k];
                        rows[i][k] -= f * v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() + 1 != dim {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c)).unwrap();
    let mut x = vec![T::zero(); dim];
    x[free] = T::one();
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = -rows[i][free] / rows[i][c];
    }
    Some(x)
}
