//! Survey corpus parsing: JSONL or CSV, one free-text response per record.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: malformed record: {message}")]
    MalformedRecord { line: usize, message: String },
    #[error("line {line}: unknown country `{country}`")]
    UnknownCountry { line: usize, country: String },
    #[error("io: {0}")]
    Io(String),
}

/// One open-ended survey response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyResponse {
    pub response_id: String,
    pub country: String,
    pub language: String,
    pub text: String,
}

/// Country codes the pipeline recognizes, with display names for prompt
/// rendering. The default registry covers the thirteen surveyed countries;
/// which subset a run analyzes is configuration, not code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountryRegistry {
    names: BTreeMap<String, String>,
}

impl CountryRegistry {
    pub fn new(names: BTreeMap<String, String>) -> Self {
        Self { names }
    }

    pub fn survey_default() -> Self {
        let names = [
            ("BR", "Brazil"),
            ("CM", "Cameroon"),
            ("FR", "France"),
            ("DE", "Germany"),
            ("IN", "India"),
            ("ID", "Indonesia"),
            ("IT", "Italy"),
            ("JP", "Japan"),
            ("MX", "Mexico"),
            ("NG", "Nigeria"),
            ("KR", "South Korea"),
            ("AE", "United Arab Emirates"),
            ("US", "United States"),
        ]
        .into_iter()
        .map(|(c, n)| (c.to_owned(), n.to_owned()))
        .collect();
        Self { names }
    }

    pub fn contains(&self, code: &str) -> bool {
        self.names.contains_key(code)
    }

    pub fn display_name(&self, code: &str) -> Option<&str> {
        self.names.get(code).map(String::as_str)
    }

    pub fn display_names(&self) -> &BTreeMap<String, String> {
        &self.names
    }

    /// Merge in overrides (new codes or replacement display names).
    pub fn with_overrides(mut self, overrides: &BTreeMap<String, String>) -> Self {
        for (code, name) in overrides {
            self.names.insert(code.clone(), name.clone());
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

/// What happened during a parse: blank-text records are dropped and
/// counted, records outside the configured country filter likewise.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseReport {
    pub records_read: usize,
    pub parsed: usize,
    pub dropped_blank: usize,
    pub dropped_filtered: usize,
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: String,
    country: String,
    language: String,
    text: String,
}

/// Parses a survey corpus. Every record's country must exist in the
/// registry; `keep` optionally restricts the output to a study subset,
/// counting what it drops.
pub fn parse_survey_corpus(
    reader: impl Read,
    format: CorpusFormat,
    registry: &CountryRegistry,
    keep: Option<&BTreeSet<String>>,
) -> Result<(Vec<SurveyResponse>, ParseReport), CorpusError> {
    let mut responses = Vec::new();
    let mut report = ParseReport::default();
    let mut ingest = |record: RawRecord, line: usize| -> Result<(), CorpusError> {
        report.records_read += 1;
        if !registry.contains(&record.country) {
            return Err(CorpusError::UnknownCountry {
                line,
                country: record.country,
            });
        }
        if record.text.trim().is_empty() {
            report.dropped_blank += 1;
            return Ok(());
        }
        if let Some(keep) = keep {
            if !keep.contains(&record.country) {
                report.dropped_filtered += 1;
                return Ok(());
            }
        }
        report.parsed += 1;
        responses.push(SurveyResponse {
            response_id: record.id,
            country: record.country,
            language: record.language,
            text: record.text,
        });
        Ok(())
    };

    match format {
        CorpusFormat::Jsonl => {
            for (i, line) in BufReader::new(reader).lines().enumerate() {
                let line_no = i + 1;
                let line = line.map_err(|e| CorpusError::Io(e.to_string()))?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: RawRecord = serde_json::from_str(&line).map_err(|e| {
                    CorpusError::MalformedRecord {
                        line: line_no,
                        message: e.to_string(),
                    }
                })?;
                ingest(record, line_no)?;
            }
        }
        CorpusFormat::Csv => {
            let mut csv_reader = csv::Reader::from_reader(reader);
            for (i, record) in csv_reader.deserialize::<RawRecord>().enumerate() {
                let line_no = i + 2; // header occupies line 1
                let record = record.map_err(|e| CorpusError::MalformedRecord {
                    line: line_no,
                    message: e.to_string(),
                })?;
                ingest(record, line_no)?;
            }
        }
    }
    Ok((responses, report))
}
