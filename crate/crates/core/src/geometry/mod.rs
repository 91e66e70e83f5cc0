//! Convex hulls, the shadow-sum volume estimate and the convergence rule.

mod convergence;
mod hull2d;
mod hull_nd;
mod vesa;

pub use convergence::{converged, ConvergenceRule, Decision};
pub use hull2d::{hull_2d, Hull2D};
pub use hull_nd::{hull_nd, Facet, HullND, DEFAULT_DIM_CAP};
pub use vesa::{vesa, VesaEstimate};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("non-finite coordinate in point {0}")]
    NonFinite(usize),
    #[error("no points given")]
    Empty,
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("points span {rank} of {dim} dimensions; the hull is degenerate")]
    Degenerate { rank: usize, dim: usize },
    #[error("hull dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("shadow volume needs at least 2 dimensions, got {0}")]
    TooFewDims(usize),
}

#[cfg(test)]
mod tests;
