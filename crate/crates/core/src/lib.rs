//! Modeling-to-generate-alternatives (MGA) over linear programs.
//!
//! The numeric core (LP model, simplex, hulls, methods) is generic over
//! [`Scalar`] (`f32` or `f64`); the aliases below fix it to `f64`, which is
//! what the testbeds and the harness use.

pub mod archive;
pub mod geometry;
pub mod harness;
pub mod lp;
pub mod methods;
pub mod scalar;
pub mod testbeds;

pub use scalar::Scalar;

pub type LinearProgram = lp::LinearProgram<f64>;
pub type Solution = lp::Solution<f64>;
pub type MgaProblem = lp::MgaProblem<f64>;
pub type MgaSolver = lp::MgaSolver<f64>;
pub type ObjectiveVector = methods::ObjectiveVector<f64>;
pub type SolutionArchive = archive::SolutionArchive<f64>;
pub type SolutionRecord = archive::SolutionRecord<f64>;
pub type HullND = geometry::HullND<f64>;
pub type Hull2D = geometry::Hull2D<f64>;
pub type VesaEstimate = geometry::VesaEstimate<f64>;

pub type LinearProgram32 = lp::LinearProgram<f32>;
pub type Solution32 = lp::Solution<f32>;
