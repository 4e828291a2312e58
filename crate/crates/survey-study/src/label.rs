//! Labeling pipeline: parse labeler output, resolve names onto the
//! schema, retry once with a strict re-prompt, quarantine what cannot be
//! used. Quarantined output is never folded into `Other`.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Read, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use facet_core::{FacetSchema, Resolution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::SurveyResponse;
use crate::labeler::{LabelRequest, Labeler, LabelerError};

#[derive(Debug, Error)]
pub enum LabelError {
    #[error(transparent)]
    Labeler(#[from] LabelerError),
    #[error("response {response_id}: unparseable labeler output")]
    Unparseable { response_id: String, raw: String },
    #[error("response {response_id}: label `{label}` has no alias resolution")]
    UnknownLabel {
        response_id: String,
        label: String,
        raw: String,
    },
    #[error("response {response_id}: no usable labels")]
    EmptyLabels { response_id: String, raw: String },
    #[error("io: {0}")]
    Io(String),
    #[error("line {line}: {message}")]
    BadLine { line: usize, message: String },
}

/// One labeled survey response. Labels are canonical facet names under the
/// active schema; the verbatim labeler output is retained for audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledResponse {
    pub response: SurveyResponse,
    pub labels: BTreeSet<String>,
    pub labeler_id: String,
    pub raw: String,
}

/// Output the pipeline could not use, kept verbatim for inspection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quarantined {
    pub response_id: String,
    pub reason: String,
    pub raw: String,
}

#[derive(Debug, Default)]
pub struct LabelRun {
    pub labeled: Vec<LabeledResponse>,
    pub quarantined: Vec<Quarantined>,
}

/// Accepts the two documented reply shapes: `{"label": "..."}` (single)
/// and `{"labels": [...]}` (multi). Anything else is unparseable.
fn parse_labels(raw: &str) -> Option<Vec<String>> {
    let value: serde_json::Value = serde_json::from_str(raw.trim()).ok()?;
    let object = value.as_object()?;
    if let Some(labels) = object.get("labels") {
        let list = labels.as_array()?;
        let mut out = Vec::with_capacity(list.len());
        for item in list {
            out.push(item.as_str()?.to_owned());
        }
        return Some(out);
    }
    object
        .get("label")
        .and_then(|l| l.as_str())
        .map(|l| vec![l.to_owned()])
}

fn resolve_labels(
    names: Vec<String>,
    schema: &FacetSchema,
    response_id: &str,
    raw: &str,
) -> Result<BTreeSet<String>, LabelError> {
    let mut labels = BTreeSet::new();
    for name in names {
        match schema.resolve(&name) {
            Ok(Resolution::Facet(i)) => {
                labels.insert(schema.facet_name(i).to_owned());
            }
            Ok(Resolution::Discard) => {}
            Err(_) => {
                return Err(LabelError::UnknownLabel {
                    response_id: response_id.to_owned(),
                    label: name,
                    raw: raw.to_owned(),
                });
            }
        }
    }
    if labels.is_empty() {
        return Err(LabelError::EmptyLabels {
            response_id: response_id.to_owned(),
            raw: raw.to_owned(),
        });
    }
    Ok(labels)
}

/// Labels one response. Unparseable output is retried once with the
/// strict flag set, then surfaced as an error; transport failures
/// propagate from the labeler.
pub fn label_response(
    labeler: &dyn Labeler,
    response: &SurveyResponse,
    schema: &FacetSchema,
) -> Result<LabeledResponse, LabelError> {
    let raw = labeler.complete(&LabelRequest {
        text: &response.text,
        strict: false,
    })?;
    let (names, raw) = match parse_labels(&raw) {
        Some(names) => (names, raw),
        None => {
            let retried = labeler.complete(&LabelRequest {
                text: &response.text,
                strict: true,
            })?;
            match parse_labels(&retried) {
                Some(names) => (names, retried),
                None => {
                    return Err(LabelError::Unparseable {
                        response_id: response.response_id.clone(),
                        raw: retried,
                    });
                }
            }
        }
    };
    let labels = resolve_labels(names, schema, &response.response_id, &raw)?;
    Ok(LabeledResponse {
        response: response.clone(),
        labels,
        labeler_id: labeler.labeler_id().to_owned(),
        raw,
    })
}

/// Labels a corpus with up to `parallelism` workers. Results are sorted by
/// response id, so they are independent of completion order; unusable
/// outputs land in the quarantine list instead of failing the run.
/// Transport failures abort.
pub fn label_corpus(
    labeler: &dyn Labeler,
    responses: &[SurveyResponse],
    schema: &FacetSchema,
    parallelism: usize,
) -> Result<LabelRun, LabelerError> {
    let parallelism = parallelism.max(1).min(responses.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<Result<LabeledResponse, LabelError>>>> =
        responses.iter().map(|_| Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..parallelism {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= responses.len() {
                    break;
                }
                let outcome = label_response(labeler, &responses[i], schema);
                *results[i].lock().expect("result slot") = Some(outcome);
            });
        }
    });

    let mut run = LabelRun::default();
    for (response, slot) in responses.iter().zip(results) {
        match slot.into_inner().expect("result slot") {
            Some(Ok(labeled)) => run.labeled.push(labeled),
            Some(Err(LabelError::Labeler(e))) => return Err(e),
            Some(Err(e)) => run.quarantined.push(Quarantined {
                response_id: response.response_id.clone(),
                reason: e.to_string(),
                raw: match e {
                    LabelError::Unparseable { raw, .. }
                    | LabelError::UnknownLabel { raw, .. }
                    | LabelError::EmptyLabels { raw, .. } => raw,
                    _ => String::new(),
                },
            }),
            None => unreachable!("every slot is filled"),
        }
    }
    run.labeled.sort_by(|a, b| {
        a.response
            .response_id
            .cmp(&b.response.response_id)
    });
    run.quarantined.sort_by(|a, b| a.response_id.cmp(&b.response_id));
    Ok(run)
}

/// JSONL export: `{response_id, country, labels[], labeler_id, raw}`.
#[derive(Debug, Serialize, Deserialize)]
struct LabeledLine {
    response_id: String,
    country: String,
    language: String,
    text: String,
    labels: Vec<String>,
    labeler_id: String,
    raw: String,
}

pub fn write_labeled_jsonl(
    labeled: &[LabeledResponse],
    mut writer: impl Write,
) -> std::io::Result<()> {
    for record in labeled {
        let line = LabeledLine {
            response_id: record.response.response_id.clone(),
            country: record.response.country.clone(),
            language: record.response.language.clone(),
            text: record.response.text.clone(),
            labels: record.labels.iter().cloned().collect(),
            labeler_id: record.labeler_id.clone(),
            raw: record.raw.clone(),
        };
        serde_json::to_writer(&mut writer, &line)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_labeled_jsonl(reader: impl Read) -> Result<Vec<LabeledResponse>, LabelError> {
    let mut labeled = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| LabelError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: LabeledLine =
            serde_json::from_str(&line).map_err(|e| LabelError::BadLine {
                line: i + 1,
                message: e.to_string(),
            })?;
        labeled.push(LabeledResponse {
            response: SurveyResponse {
                response_id: parsed.response_id,
                country: parsed.country,
                language: parsed.language,
                text: parsed.text,
            },
            labels: parsed.labels.into_iter().collect(),
            labeler_id: parsed.labeler_id,
            raw: parsed.raw,
        });
    }
    Ok(labeled)
}
