//! Precision audit: a seeded uniform sample of labeled responses for human
//! review, and the arithmetic over a filled review sheet.

use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::LabeledResponse;

#[derive(Debug, Error, PartialEq)]
pub enum AuditError {
    #[error("sample size {k} exceeds corpus size {n}")]
    SampleTooLarge { k: usize, n: usize },
    #[error("row {row}: verdict `{verdict}` is not accurate/inaccurate")]
    BadVerdict { row: usize, verdict: String },
    #[error("sheet is empty")]
    EmptySheet,
    #[error("csv: {0}")]
    Csv(String),
}

/// Outcome of a human precision audit over a seeded sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionAudit {
    pub sample_size: usize,
    pub inaccurate_count: usize,
    pub precision: f64,
    pub seed: u64,
}

/// Uniform sample without replacement, reproducible from the seed. The
/// input is sorted by response id before shuffling, so the draw does not
/// depend on upstream ordering; `k = n` returns the whole corpus in a
/// seed-determined permutation.
pub fn draw_validation_sample(
    labeled: &[LabeledResponse],
    k: usize,
    seed: u64,
) -> Result<Vec<LabeledResponse>, AuditError> {
    if k > labeled.len() {
        return Err(AuditError::SampleTooLarge {
            k,
            n: labeled.len(),
        });
    }
    let mut pool: Vec<LabeledResponse> = labeled.to_vec();
    pool.sort_by(|a, b| a.response.response_id.cmp(&b.response.response_id));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    pool.truncate(k);
    Ok(pool)
}

/// Review sheet: one row per sampled record with an empty verdict column
/// for the reviewer to fill with `accurate` or `inaccurate`.
pub fn write_review_sheet(
    sample: &[LabeledResponse],
    writer: impl Write,
) -> Result<(), AuditError> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    csv_writer
        .write_record(["response_id", "country", "text", "labels", "verdict"])
        .map_err(|e| AuditError::Csv(e.to_string()))?;
    for record in sample {
        let labels = record
            .labels
            .iter()
            .cloned()
            .collect::<Vec<_>>()
            .join("; ");
        csv_writer
            .write_record([
                record.response.response_id.as_str(),
                record.response.country.as_str(),
                record.response.text.as_str(),
                labels.as_str(),
                "",
            ])
            .map_err(|e| AuditError::Csv(e.to_string()))?;
    }
    csv_writer.flush().map_err(|e| AuditError::Csv(e.to_string()))
}

/// Computes the precision from a filled review sheet:
/// 1 − inaccurate / sample_size.
pub fn record_audit(reader: impl Read, seed: u64) -> Result<PrecisionAudit, AuditError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|e| AuditError::Csv(e.to_string()))?
        .clone();
    let verdict_column = headers
        .iter()
        .position(|h| h == "verdict")
        .ok_or_else(|| AuditError::Csv("missing verdict column".to_owned()))?;
    let mut sample_size = 0usize;
    let mut inaccurate = 0usize;
    for (i, record) in csv_reader.records().enumerate() {
        let record = record.map_err(|e| AuditError::Csv(e.to_string()))?;
        let verdict = record.get(verdict_column).unwrap_or("").trim();
        match verdict.to_lowercase().as_str() {
            "accurate" => {}
            "inaccurate" => inaccurate += 1,
            other => {
                return Err(AuditError::BadVerdict {
                    row: i + 2,
                    verdict: other.to_owned(),
                });
            }
        }
        sample_size += 1;
    }
    if sample_size == 0 {
        return Err(AuditError::EmptySheet);
    }
    Ok(PrecisionAudit {
        sample_size,
        inaccurate_count: inaccurate,
        precision: 1.0 - inaccurate as f64 / sample_size as f64,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::corpus::SurveyResponse;

    fn corpus(n: usize) -> Vec<LabeledResponse> {
        (0..n)
            .map(|i| LabeledResponse {
                response: SurveyResponse {
                    response_id: format!("r{i:05}"),
                    country: "JP".to_owned(),
                    language: "ja".to_owned(),
                    text: format!("text {i}"),
                },
                labels: BTreeSet::from(["Cuisine".to_owned()]),
                labeler_id: "kw".to_owned(),
                raw: String::new(),
            })
            .collect()
    }

    #[test]
    fn sample_of_everything_is_a_permutation() {
        let corpus = corpus(20);
        let sample = draw_validation_sample(&corpus, 20, 7).unwrap();
        assert_eq!(sample.len(), 20);
        let mut ids: Vec<&str> = sample.iter().map(|r| r.response.response_id.as_str()).collect();
        let in_order = corpus
            .iter()
            .map(|r| r.response.response_id.as_str())
            .collect::<Vec<_>>();
        assert_ne!(ids, in_order, "seeded shuffle should permute");
        ids.sort_unstable();
        assert_eq!(ids, in_order);
    }

    #[test]
    fn same_seed_same_sample_regardless_of_input_order() {
        let corpus = corpus(3000);
        let mut reversed = corpus.clone();
        reversed.reverse();
        let a = draw_validation_sample(&corpus, 258, 42).unwrap();
        let b = draw_validation_sample(&reversed, 258, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 258);
    }

    #[test]
    fn different_seeds_differ() {
        let corpus = corpus(3000);
        let a = draw_validation_sample(&corpus, 258, 1).unwrap();
        let b = draw_validation_sample(&corpus, 258, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn oversized_sample_is_rejected() {
        let corpus = corpus(5);
        assert_eq!(
            draw_validation_sample(&corpus, 6, 0).unwrap_err(),
            AuditError::SampleTooLarge { k: 6, n: 5 }
        );
    }

    #[test]
    fn audit_math_matches_direct_arithmetic() {
        let mut sheet = String::from("response_id,country,text,labels,verdict\n");
        for i in 0..258 {
            let verdict = if i < 8 { "inaccurate" } else { "accurate" };
            sheet.push_str(&format!("r{i},JP,text,Cuisine,{verdict}\n"));
        }
        let audit = record_audit(sheet.as_bytes(), 42).unwrap();
        assert_eq!(audit.sample_size, 258);
        assert_eq!(audit.inaccurate_count, 8);
        assert!((audit.precision - 0.9690).abs() < 5e-5);
        assert!((audit.precision - (1.0 - 8.0 / 258.0)).abs() < 1e-15);
    }

    #[test]
    fn unfilled_verdicts_are_rejected() {
        let sheet = "response_id,country,text,labels,verdict\nr0,JP,text,Cuisine,\n";
        assert_eq!(
            record_audit(sheet.as_bytes(), 0).unwrap_err(),
            AuditError::BadVerdict {
                row: 2,
                verdict: String::new()
            }
        );
    }

    #[test]
    fn review_sheet_round_trips_through_the_csv_layer() {
        let corpus = corpus(4);
        let sample = draw_validation_sample(&corpus, 4, 3).unwrap();
        let mut buf = Vec::new();
        write_review_sheet(&sample, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("response_id,country,text,labels,verdict\n"));
        assert_eq!(text.lines().count(), 5);
    }
}
