//! Ordered record of every solve, with tolerance-based uniqueness.

use crate::methods::ObjectiveVector;
use crate::scalar::linf;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord<T> {
    /// 0 for the base optimum, then 1, 2, ... per MGA solve.
    pub iteration: usize,
    pub values: Vec<T>,
    /// Projection onto the MGA variables.
    pub point: Vec<T>,
    /// `None` for the base optimum.
    pub objective: Option<ObjectiveVector<T>>,
    pub cost: T,
    pub unique: bool,
    pub formulate_ns: u64,
    pub solve_ns: u64,
    pub wall_ns: u64,
}

/// Records in insertion order. A record is unique when its projection is
/// farther than `dedup_tol` (L-infinity) from every earlier unique one.
#[derive(Debug, Clone)]
pub struct SolutionArchive<T> {
    records: Vec<SolutionRecord<T>>,
    unique: Vec<usize>,
    dedup_tol: T,
}

impl<T: Scalar> SolutionArchive<T> {
    pub fn new(dedup_tol: T) -> Self {
        SolutionArchive {
            records: Vec::new(),
            unique: Vec::new(),
            dedup_tol,
        }
    }

    pub fn dedup_tol(&self) -> T {
        self.dedup_tol
    }

    pub fn is_new(&self, point: &[T]) -> bool {
        !self
            .unique
            .iter()
            .any(|&i| linf(&self.records[i].point, point) <= self.dedup_tol)
    }

    /// Append, setting `unique`; returns it.
    pub fn push(&mut self, mut record: SolutionRecord<T>) -> bool {
        record.unique = self.is_new(&record.point);
        if record.unique {
            self.unique.push(self.records.len());
        }
        let unique = record.unique;
        self.records.push(record);
        unique
    }

    pub fn records(&self) -> &[SolutionRecord<T>] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn unique_count(&self) -> usize {
        self.unique.len()
    }

    pub fn unique_records(&self) -> impl Iterator<Item = &SolutionRecord<T>> + '_ {
        self.unique.iter().map(move |&i| &self.records[i])
    }

    pub fn unique_points(&self) -> Vec<Vec<T>> {
        self.unique_records().map(|r| r.point.clone()).collect()
    }

    /// Projections of every record, duplicates included.
    pub fn points(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.records.iter().map(|r| r.point.as_slice())
    }
}
