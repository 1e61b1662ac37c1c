//! Numerical search for zeros of the test map on embedded spheres and curves.

use thiserror::Error;

pub mod curve;
pub mod dd;
pub mod embedding;
pub mod solver;
pub mod testmap;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("embedding is not injective: {0}")]
    NonInjectiveSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("metric check failed: {0}")]
    MetricViolation(String),
    #[error("at least one start is required")]
    NoStarts,
}
