//! Facet schemas, distribution vectors and the alignment metrics used to
//! compare them.
//!
//! The crate is the numeric foundation for the rest of the workspace: it
//! defines the canonical cultural-facet schema, normalized facet
//! distributions, signed error matrices and the three alignment metrics
//! (Pearson correlation, cosine similarity, mean squared error). Everything
//! here is a pure function over immutable values and is safe to call from
//! any number of threads.
//!
//! All numeric code is generic over [`Float`] (`f32` or `f64`); the
//! concrete aliases at the crate root fix the working precision used by
//! the pipeline crates.

pub mod matrix;
pub mod metrics;
pub mod num;
pub mod schema;
pub mod vector;

pub use matrix::{ErrorMatrix, MatrixError};
pub use metrics::{cosine, mse, pearson, AlignmentScore, MetricError};
pub use num::Float;
pub use schema::{FacetSchema, Resolution, SchemaError, SchemaId};
pub use vector::{
    normalize_counts, project_to_schema, FacetVector, VectorError, VectorForm, NORM_TOL,
};

/// Working-precision aliases. The pipeline runs on `f64` end to end;
/// the `32` variants exist for callers that trade precision for size.
pub type FacetVector64 = FacetVector<f64>;
pub type FacetVector32 = FacetVector<f32>;
pub type AlignmentScore64 = AlignmentScore<f64>;
pub type AlignmentScore32 = AlignmentScore<f32>;
pub type ErrorMatrix64 = ErrorMatrix<f64>;
pub type ErrorMatrix32 = ErrorMatrix<f32>;
