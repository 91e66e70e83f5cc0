use std::cmp::Ordering;

use super::GeometryError;
use crate::Scalar;

/// Convex polygon, counter-clockwise from the lexicographically smallest
/// vertex. Collinear and coincident inputs collapse to one or two vertices
/// with zero area.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull2D<T> {
    vertices: Vec<[T; 2]>,
    area: T,
}

fn cross<T: Scalar>(o: [T; 2], a: [T; 2], b: [T; 2]) -> T {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn len<T: Scalar>(a: [T; 2], b: [T; 2]) -> T {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// True when `o -> a -> b` is a strict left turn beyond the collinearity
/// tolerance (relative to the two arm lengths).
fn left_turn<T: Scalar>(o: [T; 2], a: [T; 2], b: [T; 2]) -> bool {
    cross(o, a, b) > T::GEOM_EPS * len(o, a) * len(o, b)
}

fn lex<T: Scalar>(a: &[T; 2], b: &[T; 2]) -> Ordering {
    a[0].partial_cmp(&b[0])
        .unwrap_or(Ordering::Equal)
        .then(a[1].partial_cmp(&b[1]).unwrap_or(Ordering::Equal))
}

pub fn hull_2d<T: Scalar>(points: &[[T; 2]]) -> Result<Hull2D<T>, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::Empty);
    }
    if let Some(i) = points
        .iter()
        .position(|p| !(p[0].is_finite() && p[1].is_finite()))
    {
        return Err(GeometryError::NonFinite(i));
    }
    let mut pts = points.to_vec();
    pts.sort_by(lex);
    pts.dedup();
    Ok(Hull2D::from_sorted(pts))
}

impl<T: Scalar> Hull2D<T> {
    fn from_sorted(pts: Vec<[T; 2]>) -> Self {
        if pts.len() <= 2 {
            return Hull2D {
                vertices: pts,
                area: T::zero(),
            };
        }
        let mut hull: Vec<[T; 2]> = Vec::with_capacity(pts.len() + 1);
        for &p in &pts {
            while hull.len() >= 2 && !left_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
                hull.pop();
            }
            hull.push(p);
        }
        let lower = hull.len() + 1;
        for &p in pts.iter().rev().skip(1) {
            while hull.len() >= lower && !left_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
        if hull.len() <= 2 {
            // every point collinear: keep the two extremes
            let ends = vec![pts[0], pts[pts.len() - 1]];
            return Hull2D {
                vertices: ends,
                area: T::zero(),
            };
        }
        let area = shoelace(&hull);
        Hull2D {
            vertices: hull,
            area,
        }
    }

    pub fn vertices(&self) -> &[[T; 2]] {
        &self.vertices
    }

    pub fn area(&self) -> T {
        self.area
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() <= 2
    }

    /// Inside or on the boundary, with the same tolerance the hull was
    /// built with. Degenerate hulls contain only their vertices.
    pub fn contains(&self, p: [T; 2]) -> bool {
        let v = &self.vertices;
        if v.len() <= 2 {
            return v.contains(&p);
        }
        (0..v.len()).all(|i| {
            let a = v[i];
            let b = v[(i + 1) % v.len()];
            cross(a, b, p) >= -(T::GEOM_EPS * len(a, b) * len(a, p))
        })
    }

    /// Hull of the current vertices plus `p`, which equals the hull of every
    /// point seen so far plus `p`.
    pub fn with_point(&self, p: [T; 2]) -> Result<Self, GeometryError> {
        if !(p[0].is_finite() && p[1].is_finite()) {
            return Err(GeometryError::NonFinite(0));
        }
        if self.contains(p) {
            return Ok(self.clone());
        }
        let mut pts = self.vertices.clone();
        pts.push(p);
        pts.sort_by(lex);
        pts.dedup();
        Ok(Hull2D::from_sorted(pts))
    }
}

fn shoelace<T: Scalar>(v: &[[T; 2]]) -> T {
    let o = v[0];
    let mut twice = T::zero();
    for i in 1..v.len() - 1 {
        twice += cross(o, v[i], v[i + 1]);
    }
    twice / T::lit(2.0)
}
