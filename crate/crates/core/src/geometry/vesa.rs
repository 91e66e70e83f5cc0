use super::{hull_2d, GeometryError, Hull2D};
use crate::Scalar;

/// Sum of the 2-D hull areas of every coordinate-pair projection of a point
/// set. Keeps one hull per pair so points can be added one at a time.
#[derive(Debug, Clone)]
pub struct VesaEstimate<T> {
    dims: usize,
    pairs: Vec<(usize, usize)>,
    hulls: Vec<Option<Hull2D<T>>>,
    total: T,
}

pub fn vesa<T: Scalar>(points: &[Vec<T>], dims: usize) -> Result<VesaEstimate<T>, GeometryError> {
    let mut est = VesaEstimate::new(dims)?;
    for p in points {
        if p.len() != dims {
            return Err(GeometryError::DimensionMismatch {
                expected: dims,
                got: p.len(),
            });
        }
    }
    if points.is_empty() {
        return Ok(est);
    }
    for (slot, &(i, j)) in est.hulls.iter_mut().zip(&est.pairs) {
        let shadow: Vec<[T; 2]> = points.iter().map(|p| [p[i], p[j]]).collect();
        *slot = Some(hull_2d(&shadow)?);
    }
    est.total = est.sum();
    Ok(est)
}

impl<T: Scalar> VesaEstimate<T> {
    /// Estimate over no points (total zero).
    pub fn new(dims: usize) -> Result<Self, GeometryError> {
        if dims < 2 {
            return Err(GeometryError::TooFewDims(dims));
        }
        let pairs: Vec<(usize, usize)> = (0..dims)
            .flat_map(|i| (i + 1..dims).map(move |j| (i, j)))
            .collect();
        Ok(VesaEstimate {
            dims,
            hulls: vec![None; pairs.len()],
            pairs,
            total: T::zero(),
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn total(&self) -> T {
        self.total
    }

    /// `((i, j), area)` for every pair `i < j`, in lexicographic pair order.
    pub fn pair_areas(&self) -> impl Iterator<Item = ((usize, usize), T)> + '_ {
        self.pairs
            .iter()
            .zip(&self.hulls)
            .map(|(&pair, h)| (pair, h.as_ref().map_or(T::zero(), |h| h.area())))
    }

    pub fn pair_hull(&self, i: usize, j: usize) -> Option<&Hull2D<T>> {
        let k = self.pairs.iter().position(|&p| p == (i, j))?;
        self.hulls[k].as_ref()
    }

    /// Add one point; returns the new total.
    pub fn insert(&mut self, point: &[T]) -> Result<T, GeometryError> {
        if point.len() != self.dims {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dims,
                got: point.len(),
            });
        }
        if point.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NonFinite(0));
        }
        for (slot, &(i, j)) in self.hulls.iter_mut().zip(&self.pairs) {
            let q = [point[i], point[j]];
            *slot = Some(match slot {
                Some(h) => h.with_point(q)?,
                None => hull_2d(&[q])?,
            });
        }
        self.total = self.sum();
        Ok(self.total)
    }

    fn sum(&self) -> T {
        self.hulls
            .iter()
            .flatten()
            .fold(T::zero(), |acc, h| acc + h.area())
    }
}
