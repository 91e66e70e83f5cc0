//! Objective-vector selection strategies.
//!
//! Every vector is in minimization form: the solver minimizes
//! `Σ weights[k] · x[mga_vars[k]]`, so a negative weight pushes a variable up.

mod hsj;
mod hybrid;
mod maa;
mod minmax;
mod random;

pub use hsj::{hsj_propose, Hsj, NONZERO_TOL};
pub use hybrid::{default_brackets, hybrid_schedule};
pub use maa::{affine_rank, maa_init, Maa, DEFAULT_ANGLE_TOL_DEG};
pub use minmax::MinMax;
pub use random::RandomVector;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hsj,
    Random,
    #[serde(alias = "min-max", alias = "capacity-minmax")]
    MinMax,
    Maa,
    #[serde(alias = "combo")]
    Hybrid,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Hsj,
        Method::Random,
        Method::MinMax,
        Method::Maa,
        Method::Hybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Hsj => "hsj",
            Method::Random => "random",
            Method::MinMax => "minmax",
            Method::Maa => "maa",
            Method::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hsj" => Ok(Method::Hsj),
            "random" => Ok(Method::Random),
            "minmax" | "min-max" | "capacity-minmax" => Ok(Method::MinMax),
            "maa" => Ok(Method::Maa),
            "hybrid" | "combo" => Ok(Method::Hybrid),
            other => Err(format!(
                "unknown method `{other}` (expected hsj, random, minmax, maa or hybrid)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector<T> {
    pub weights: Vec<T>,
    pub method: Method,
    /// MGA iteration that will solve this vector.
    pub iteration: usize,
    /// Hull facet the vector came from (MAA only).
    pub facet: Option<usize>,
}

impl<T> ObjectiveVector<T> {
    pub fn new(weights: Vec<T>, method: Method, iteration: usize) -> Self {
        ObjectiveVector {
            weights,
            method,
            iteration,
            facet: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MethodError {
    #[error("need at least one MGA dimension")]
    NoDimensions,
    #[error("no solutions archived yet")]
    EmptyArchive,
    #[error("every weight is zero; no MGA variable has been nonzero yet")]
    AllZeroWeights,
    #[error("requested {requested} sign vectors but only {remaining} unused remain")]
    SignSpaceExhausted { requested: usize, remaining: usize },
    #[error("{0}; re-initialize with more exterior points")]
    Hull(#[from] GeometryError),
    #[error(
        "after {iterations} initial solves the points span {rank} of {dim} dimensions; \
         the near-optimal region may be lower-dimensional"
    )]
    InitRank {
        rank: usize,
        dim: usize,
        iterations: usize,
    },
    #[error("bracket has {got} weights, expected {expected}")]
    BracketLength { expected: usize, got: usize },
    #[error("bracket is all zero")]
    ZeroBracket,
}
