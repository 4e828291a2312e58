//! Survey ingestion and facet labeling: parses free-text response corpora,
//! labels them with cultural facets through a pluggable labeler, audits
//! label precision on a seeded sample, and aggregates per-country
//! importance vectors.

pub mod audit;
pub mod corpus;
pub mod importance;
pub mod label;
pub mod labeler;

pub use audit::{
    draw_validation_sample, record_audit, write_review_sheet, AuditError, PrecisionAudit,
};
pub use corpus::{
    parse_survey_corpus, CorpusError, CorpusFormat, CountryRegistry, ParseReport, SurveyResponse,
};
pub use importance::{build_importance_vector, ImportanceError};
pub use label::{
    label_corpus, label_response, read_labeled_jsonl, write_labeled_jsonl, LabelError, LabelRun,
    LabeledResponse, Quarantined,
};
pub use labeler::{HttpLabeler, KeywordLabeler, KeywordRules, LabelRequest, Labeler, LabelerError};
