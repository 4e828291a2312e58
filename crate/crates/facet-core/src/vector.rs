//! Facet distribution vectors.
//!
//! A [`FacetVector`] is an array of per-facet values ordered by its schema.
//! It is either a normalized distribution (entries >= 0 summing to 1 within
//! [`NORM_TOL`]) or an explicitly tagged vector of raw counts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{from_u64, Float};
use crate::schema::{FacetSchema, Resolution, SchemaError, SchemaId};

/// Absolute tolerance on the unit-sum check for normalized vectors at f64
/// working precision. At f32 the check widens to a few ulps per element,
/// since 1e-9 sits below f32 resolution.
pub const NORM_TOL: f64 = 1e-9;

fn norm_tolerance<F: Float>(len: usize) -> f64 {
    let eps = F::epsilon().to_f64().unwrap_or(f64::EPSILON);
    NORM_TOL.max(eps * 4.0 * len.max(1) as f64)
}

#[derive(Debug, Error, PartialEq)]
pub enum VectorError {
    #[error("vector length {got} does not match schema size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("negative entry at index {0}")]
    NegativeEntry(usize),
    #[error("entries sum to {0}, expected 1 within 1e-9")]
    NotNormalized(f64),
    #[error("all counts are zero")]
    AllZero,
    #[error("`{0}` does not resolve under the schema's alias map")]
    UnknownFacet(String),
    #[error("projection dropped all mass")]
    AllMassDropped,
    #[error("target facet `{0}` does not exist in the source schema")]
    FacetNotInSource(String),
    #[error("vector belongs to a different schema")]
    SchemaMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorForm {
    Normalized,
    Counts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetVector<F = f64> {
    schema_id: SchemaId,
    values: Vec<F>,
    form: VectorForm,
}

impl<F: Float> FacetVector<F> {
    /// A normalized distribution over the schema's facets.
    pub fn normalized(schema: &FacetSchema, values: Vec<F>) -> Result<Self, VectorError> {
        check_shape(schema, &values)?;
        let sum: F = values.iter().copied().sum();
        let sum_f64 = sum.to_f64().unwrap_or(f64::NAN);
        if !((sum_f64 - 1.0).abs() <= norm_tolerance::<F>(values.len())) {
            return Err(VectorError::NotNormalized(sum_f64));
        }
        Ok(Self {
            schema_id: schema.id().clone(),
            values,
            form: VectorForm::Normalized,
        })
    }

    /// A raw count vector, tagged as such.
    pub fn counts(schema: &FacetSchema, values: Vec<F>) -> Result<Self, VectorError> {
        check_shape(schema, &values)?;
        Ok(Self {
            schema_id: schema.id().clone(),
            values,
            form: VectorForm::Counts,
        })
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn form(&self) -> VectorForm {
        self.form
    }

    pub fn is_normalized(&self) -> bool {
        self.form == VectorForm::Normalized
    }

    pub fn schema_id(&self) -> &SchemaId {
        &self.schema_id
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> F {
        self.values[index]
    }

    /// Value for a facet looked up by canonical name.
    pub fn by_name(&self, schema: &FacetSchema, name: &str) -> Option<F> {
        debug_assert_eq!(schema.id(), &self.schema_id);
        schema.position(name).map(|i| self.values[i])
    }
}

fn check_shape<F: Float>(schema: &FacetSchema, values: &[F]) -> Result<(), VectorError> {
    if values.len() != schema.len() {
        return Err(VectorError::LengthMismatch {
            expected: schema.len(),
            got: values.len(),
        });
    }
    if let Some(i) = values.iter().position(|v| *v < F::zero()) {
        return Err(VectorError::NegativeEntry(i));
    }
    Ok(())
}

/// Turns a map of per-name counts into a normalized distribution.
///
/// Every key is resolved through the schema's alias map; keys that resolve
/// to the discard bucket are excluded from both the numerator and the
/// denominator. value\[i\] = count\[i\] / total.
pub fn normalize_counts<F: Float>(
    counts: &BTreeMap<String, u64>,
    schema: &FacetSchema,
) -> Result<FacetVector<F>, VectorError> {
    let mut per_facet = vec![0u64; schema.len()];
    for (name, count) in counts {
        match schema.resolve(name) {
            Ok(Resolution::Facet(i)) => per_facet[i] += count,
            Ok(Resolution::Discard) => {}
            Err(SchemaError::UnknownName(name)) => {
                return Err(VectorError::UnknownFacet(name));
            }
            Err(other) => return Err(VectorError::UnknownFacet(other.to_string())),
        }
    }
    let total: u64 = per_facet.iter().sum();
    if total == 0 {
        return Err(VectorError::AllZero);
    }
    let denom: F = from_u64(total);
    let values = per_facet
        .iter()
        .map(|&c| from_u64::<F>(c) / denom)
        .collect();
    FacetVector::normalized(schema, values)
}

/// Re-expresses a vector over a (usually smaller) target schema.
///
/// Facets absent from the target are dropped and the surviving mass is
/// renormalized to sum to 1. Projecting twice onto the same target is the
/// same as projecting once.
pub fn project_to_schema<F: Float>(
    vector: &FacetVector<F>,
    source: &FacetSchema,
    target: &FacetSchema,
) -> Result<FacetVector<F>, VectorError> {
    if vector.schema_id() != source.id() {
        return Err(VectorError::SchemaMismatch);
    }
    let mut surviving = Vec::with_capacity(target.len());
    for facet in target.facets() {
        let i = source
            .position(facet)
            .ok_or_else(|| VectorError::FacetNotInSource(facet.clone()))?;
        surviving.push(vector.get(i));
    }
    let mass: F = surviving.iter().copied().sum();
    if mass <= F::zero() {
        return Err(VectorError::AllMassDropped);
    }
    let values = surviving.into_iter().map(|v| v / mass).collect();
    FacetVector::normalized(target, values)
}
