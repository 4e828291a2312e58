//! Pluggable labeler backends: a remote JSON-over-HTTP endpoint and an
//! offline deterministic keyword matcher, both speaking the same wire
//! shape so the rest of the pipeline cannot tell them apart.

use std::collections::BTreeMap;
use std::io::Read;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabelerError {
    #[error("labeler unavailable after {attempts} attempts: {message}")]
    Unavailable { attempts: u32, message: String },
    #[error("labeler endpoint rejected the request: {0}")]
    Rejected(String),
    #[error("keyword rules are invalid: {0}")]
    BadRules(String),
}

/// A labeling request. `strict` is set on the one retry a caller makes
/// after unparseable output; the HTTP backend forwards it so a remote
/// labeler can tighten its decoding.
#[derive(Debug, Clone, Copy)]
pub struct LabelRequest<'a> {
    pub text: &'a str,
    pub strict: bool,
}

/// Produces raw labeler output for one text. Implementations must be
/// usable from multiple worker threads at once.
pub trait Labeler: Sync {
    fn labeler_id(&self) -> &str;
    fn complete(&self, request: &LabelRequest<'_>) -> Result<String, LabelerError>;
}

/// Keyword → facet-name rules for the deterministic backends. The file
/// format is a bare JSON object: `{"sushi": "Cuisine", ...}`. Matching is
/// case-insensitive substring containment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KeywordRules {
    rules: BTreeMap<String, String>,
}

impl KeywordRules {
    pub fn new(rules: BTreeMap<String, String>) -> Self {
        Self { rules }
    }

    pub fn from_reader(mut reader: impl Read) -> Result<Self, LabelerError> {
        let mut buf = String::new();
        reader
            .read_to_string(&mut buf)
            .map_err(|e| LabelerError::BadRules(e.to_string()))?;
        serde_json::from_str(&buf).map_err(|e| LabelerError::BadRules(e.to_string()))
    }

    /// Facet names whose keyword occurs in the text, deduplicated, in
    /// rule order.
    pub fn matches(&self, text: &str) -> Vec<String> {
        let haystack = text.to_lowercase();
        let mut names = Vec::new();
        for (keyword, facet) in &self.rules {
            if haystack.contains(&keyword.to_lowercase()) && !names.contains(facet) {
                names.push(facet.clone());
            }
        }
        names
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Offline deterministic labeler. When no rule matches, it emits the
/// configured fallback label (`OTHER` for survey labeling) or an empty
/// list when there is none.
pub struct KeywordLabeler {
    id: String,
    rules: KeywordRules,
    fallback: Option<String>,
}

impl KeywordLabeler {
    pub fn new(id: impl Into<String>, rules: KeywordRules, fallback: Option<String>) -> Self {
        Self {
            id: id.into(),
            rules,
            fallback,
        }
    }
}

impl Labeler for KeywordLabeler {
    fn labeler_id(&self) -> &str {
        &self.id
    }

    fn complete(&self, request: &LabelRequest<'_>) -> Result<String, LabelerError> {
        let mut labels = self.rules.matches(request.text);
        if labels.is_empty() {
            if let Some(fallback) = &self.fallback {
                labels.push(fallback.clone());
            }
        }
        Ok(serde_json::json!({ "labels": labels }).to_string())
    }
}

#[derive(Serialize)]
struct WireRequest<'a> {
    text: &'a str,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    strict: bool,
}

/// Remote labeler: POST `{"text": ...}`, reply is either
/// `{"text": ..., "label": ...}` or `{"labels": [...]}`. Transport
/// failures and 429/5xx replies are retried with exponential backoff up
/// to the budget.
pub struct HttpLabeler {
    id: String,
    endpoint: String,
    client: reqwest::blocking::Client,
    max_retries: u32,
    backoff: Duration,
}

impl HttpLabeler {
    pub fn new(
        id: impl Into<String>,
        endpoint: impl Into<String>,
        timeout: Duration,
        max_retries: u32,
        backoff: Duration,
    ) -> Result<Self, LabelerError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| LabelerError::Rejected(e.to_string()))?;
        Ok(Self {
            id: id.into(),
            endpoint: endpoint.into(),
            client,
            max_retries,
            backoff,
        })
    }
}

impl Labeler for HttpLabeler {
    fn labeler_id(&self) -> &str {
        &self.id
    }

    fn complete(&self, request: &LabelRequest<'_>) -> Result<String, LabelerError> {
        let body = WireRequest {
            text: request.text,
            strict: request.strict,
        };
        let mut attempts = 0;
        let mut last_error = String::new();
        while attempts <= self.max_retries {
            if attempts > 0 {
                std::thread::sleep(self.backoff * 2u32.pow(attempts - 1));
            }
            attempts += 1;
            match self.client.post(&self.endpoint).json(&body).send() {
                Ok(response) => {
                    let status = response.status();
                    if status.is_success() {
                        return response
                            .text()
                            .map_err(|e| LabelerError::Rejected(e.to_string()));
                    }
                    if status.as_u16() == 429 || status.is_server_error() {
                        last_error = format!("status {status}");
                        continue;
                    }
                    return Err(LabelerError::Rejected(format!("status {status}")));
                }
                Err(e) => {
                    last_error = e.to_string();
                }
            }
        }
        Err(LabelerError::Unavailable {
            attempts,
            message: last_error,
        })
    }
}
