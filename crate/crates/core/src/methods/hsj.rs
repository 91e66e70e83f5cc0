use super::{Method, MethodError, ObjectiveVector};
use crate::archive::SolutionArchive;
use crate::Scalar;

/// A variable has "appeared" in a solution once it exceeds this value.
pub const NONZERO_TOL: f64 = 1e-6;

/// Per-variable count of archived solutions (duplicates included) in which
/// the variable was nonzero. Those counts are the next objective's weights,
/// pushing the search away from variables already used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hsj {
    counts: Vec<u64>,
    observed: usize,
}

impl Hsj {
    pub fn new(dims: usize) -> Self {
        Hsj {
            counts: vec![0; dims],
            observed: 0,
        }
    }

    pub fn observe<T: Scalar>(&mut self, point: &[T]) {
        let tol = T::lit(NONZERO_TOL);
        for (c, &x) in self.counts.iter_mut().zip(point) {
            if x > tol {
                *c += 1;
            }
        }
        self.observed += 1;
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn propose<T: Scalar>(&self, iteration: usize) -> Result<ObjectiveVector<T>, MethodError> {
        if self.observed == 0 {
            return Err(MethodError::EmptyArchive);
        }
        if self.counts.iter().all(|&c| c == 0) {
            return Err(MethodError::AllZeroWeights);
        }
        let weights = self.counts.iter().map(|&c| T::lit(c as f64)).collect();
        Ok(ObjectiveVector::new(weights, Method::Hsj, iteration))
    }
}

/// Weights recomputed from scratch over every archived record.
pub fn hsj_propose<T: Scalar>(
    archive: &SolutionArchive<T>,
    iteration: usize,
) -> Result<ObjectiveVector<T>, MethodError> {
    let dims = archive
        .records()
        .first()
        .ok_or(MethodError::EmptyArchive)?
        .point
        .len();
    let mut state = Hsj::new(dims);
    for p in archive.points() {
        state.observe(p);
    }
    state.propose(iteration)
}
