//! Differential forms over coordinate charts and Lie charts.
//!
//! Both backends share one representation; only the exterior derivative on
//! basis covectors differs. On a Lie chart coefficients are functions of t
//! alone and `d` acts through the structure constants,
//! `d th_k = -sum_{i<j} c^k_{ij} th_i ^ th_j`.

mod chart;
mod form;
mod vector;

use thiserror::Error;

pub use chart::{Chart, ChartKind};
pub use form::DifferentialForm;
pub use vector::VectorField;

use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("form of degree {degree} is not a top form on a {dim}-dimensional chart")]
    NotTopDegree { degree: usize, dim: usize },
    #[error("structure constants not antisymmetric at c[{k}][{i}][{j}]")]
    NotAntisymmetric { k: usize, i: usize, j: usize },
    #[error("structure constants violate the Jacobi identity at (i,j,k,l) = ({i},{j},{k},{l})")]
    JacobiViolated { i: usize, j: usize, k: usize, l: usize },
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("empty product")]
    Empty,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[cfg(test)]
mod tests;
