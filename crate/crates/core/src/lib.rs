//! Exact exterior calculus for Godbillon-Vey type invariants of foliations
//! and of one-parameter families of foliations.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod foliation;
pub mod forms;
pub mod gauge;
pub mod invariants;
mod linalg;
pub mod parse;
pub mod random;
pub mod scalar;
pub mod witness;

pub use catalog::{Catalog, CatalogEntry, CatalogError};
pub use foliation::{admissible_variations, FoliationError, FoliationFamily, InfinitesimalVariation};
pub use forms::{Chart, ChartKind, DifferentialForm, FormError, VectorField};
pub use gauge::GaugeMove;
pub use invariants::{integrate_top, report, InvariantError, InvariantReport};
pub use parse::{parse_form, parse_scalar, parse_vector, ParseError};
pub use scalar::{int, rat, Rational, Scalar, ScalarError, Var, VariableTable};
pub use witness::ExactnessWitness;
