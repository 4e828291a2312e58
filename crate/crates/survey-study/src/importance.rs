//! Per-country importance vectors: label occurrences counted once per
//! distinct label per response, divided by the country's label total.

use std::collections::BTreeMap;

use facet_core::{normalize_counts, FacetSchema, FacetVector, Float, VectorError};
use thiserror::Error;

use crate::label::LabeledResponse;

#[derive(Debug, Error, PartialEq)]
pub enum ImportanceError {
    #[error("response {response_id} belongs to {got}, expected {expected}")]
    CountryMismatch {
        response_id: String,
        expected: String,
        got: String,
    },
    #[error("no labeled responses")]
    Empty,
    #[error(transparent)]
    Vector(#[from] VectorError),
}

/// Builds the country's label distribution over the counting schema
/// (usually the 12-category schema including `Other`). Callers project to
/// the 11-facet schema before computing metrics.
pub fn build_importance_vector<F: Float>(
    labeled: &[LabeledResponse],
    country: &str,
    schema: &FacetSchema,
) -> Result<FacetVector<F>, ImportanceError> {
    if labeled.is_empty() {
        return Err(ImportanceError::Empty);
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for record in labeled {
        if record.response.country != country {
            return Err(ImportanceError::CountryMismatch {
                response_id: record.response.response_id.clone(),
                expected: country.to_owned(),
                got: record.response.country.clone(),
            });
        }
        // `labels` is a set: a facet mentioned many times in one response
        // still counts once for that response.
        for label in &record.labels {
            *counts.entry(label.clone()).or_insert(0) += 1;
        }
    }
    Ok(normalize_counts(&counts, schema)?)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use facet_core::FacetSchema;

    use super::*;
    use crate::corpus::SurveyResponse;

    fn labeled(id: &str, country: &str, labels: &[&str]) -> LabeledResponse {
        LabeledResponse {
            response: SurveyResponse {
                response_id: id.to_owned(),
                country: country.to_owned(),
                language: "en".to_owned(),
                text: "fixture".to_owned(),
            },
            labels: labels.iter().map(|l| (*l).to_owned()).collect::<BTreeSet<_>>(),
            labeler_id: "kw".to_owned(),
            raw: String::new(),
        }
    }

    #[test]
    fn single_label_yields_a_point_mass() {
        let schema = FacetSchema::canonical_12();
        let v: FacetVector =
            build_importance_vector(&[labeled("a", "JP", &["Cuisine"])], "JP", &schema).unwrap();
        assert_eq!(v.by_name(&schema, "Cuisine"), Some(1.0));
        let sum: f64 = v.values().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn counts_are_per_label_per_response() {
        let schema = FacetSchema::canonical_12();
        let records = vec![
            labeled("a", "JP", &["Cuisine", "Sports"]),
            labeled("b", "JP", &["Cuisine"]),
            labeled("c", "JP", &["Other"]),
        ];
        let v: FacetVector = build_importance_vector(&records, "JP", &schema).unwrap();
        assert_eq!(v.by_name(&schema, "Cuisine"), Some(0.5));
        assert_eq!(v.by_name(&schema, "Sports"), Some(0.25));
        assert_eq!(v.by_name(&schema, "Other"), Some(0.25));
    }

    #[test]
    fn input_order_does_not_matter() {
        let schema = FacetSchema::canonical_12();
        let mut records = vec![
            labeled("a", "JP", &["Cuisine", "Events"]),
            labeled("b", "JP", &["Sports"]),
            labeled("c", "JP", &["VNBM"]),
        ];
        let forward: FacetVector =
            build_importance_vector(&records, "JP", &schema).unwrap();
        records.reverse();
        let backward: FacetVector =
            build_importance_vector(&records, "JP", &schema).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn wrong_country_is_rejected() {
        let schema = FacetSchema::canonical_12();
        let err = build_importance_vector::<f64>(
            &[labeled("a", "BR", &["Cuisine"])],
            "JP",
            &schema,
        )
        .unwrap_err();
        assert!(matches!(err, ImportanceError::CountryMismatch { .. }));
    }

    #[test]
    fn empty_input_is_rejected() {
        let schema = FacetSchema::canonical_12();
        assert_eq!(
            build_importance_vector::<f64>(&[], "JP", &schema).unwrap_err(),
            ImportanceError::Empty
        );
    }
}
