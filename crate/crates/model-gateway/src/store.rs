//! Append-only JSONL response store with an in-memory index.
//!
//! One `ModelResponse` per line, UTF-8, stable field order, keyed by job
//! id. The file is a log: when a job id appears on several lines (an
//! errored job re-run later), the last line wins at load time. Appends are
//! serialized through a single writer; readers see a snapshot.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("store io: {0}")]
    Io(#[from] std::io::Error),
    #[error("store line {line}: {message}")]
    Corrupt { line: usize, message: String },
    #[error("no stored response for job {0}")]
    NotFound(String),
    #[error("store is read-only")]
    ReadOnly,
    #[error("ok response for job {0} has empty text")]
    EmptyText(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseStatus {
    Ok,
    Refused,
    Error,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseMeta {
    pub latency_ms: u64,
    pub retries: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prompt_tokens: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub completion_tokens: Option<u64>,
}

/// One stored generation. `status == Ok` implies non-empty text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelResponse {
    pub job_id: String,
    pub text: String,
    pub status: ResponseStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub meta: ResponseMeta,
    pub fetched_at: u64,
}

impl ModelResponse {
    pub fn is_terminal_answer(&self) -> bool {
        matches!(self.status, ResponseStatus::Ok | ResponseStatus::Refused)
    }

    fn validate(&self) -> Result<(), StoreError> {
        if self.status == ResponseStatus::Ok && self.text.trim().is_empty() {
            return Err(StoreError::EmptyText(self.job_id.clone()));
        }
        Ok(())
    }
}

pub struct ResponseStore {
    path: PathBuf,
    index: RwLock<BTreeMap<String, ModelResponse>>,
    writer: Option<Mutex<BufWriter<File>>>,
}

impl ResponseStore {
    /// Opens (creating if needed) a store for reading and appending.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        let index = load_index(&path)?;
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Self {
            path,
            index: RwLock::new(index),
            writer: Some(Mutex::new(BufWriter::new(file))),
        })
    }

    /// Opens an existing store for replay; appends are rejected.
    pub fn open_read_only(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        if !path.exists() {
            return Err(StoreError::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("{} does not exist", path.display()),
            )));
        }
        let index = load_index(&path)?;
        Ok(Self {
            path,
            index: RwLock::new(index),
            writer: None,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn is_read_only(&self) -> bool {
        self.writer.is_none()
    }

    pub fn len(&self) -> usize {
        self.index.read().expect("store index").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, job_id: &str) -> Option<ModelResponse> {
        self.index.read().expect("store index").get(job_id).cloned()
    }

    pub fn contains(&self, job_id: &str) -> bool {
        self.index.read().expect("store index").contains_key(job_id)
    }

    pub fn job_ids(&self) -> Vec<String> {
        self.index.read().expect("store index").keys().cloned().collect()
    }

    /// Persists a response: the line is flushed to disk before the index
    /// is updated, so a response is never observable in memory without
    /// being durable.
    pub fn append(&self, response: ModelResponse) -> Result<(), StoreError> {
        response.validate()?;
        let writer = self.writer.as_ref().ok_or(StoreError::ReadOnly)?;
        let line = serde_json::to_string(&response).expect("response serializes");
        {
            let mut writer = writer.lock().expect("store writer");
            writer.write_all(line.as_bytes())?;
            writer.write_all(b"\n")?;
            writer.flush()?;
        }
        self.index
            .write()
            .expect("store index")
            .insert(response.job_id.clone(), response);
        Ok(())
    }
}

fn load_index(path: &Path) -> Result<BTreeMap<String, ModelResponse>, StoreError> {
    let mut index = BTreeMap::new();
    if !path.exists() {
        return Ok(index);
    }
    let reader = BufReader::new(File::open(path)?);
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response: ModelResponse =
            serde_json::from_str(&line).map_err(|e| StoreError::Corrupt {
                line: i + 1,
                message: e.to_string(),
            })?;
        index.insert(response.job_id.clone(), response);
    }
    Ok(index)
}

/// Replay: the stored response for a job, byte-for-byte what was
/// persisted. Guarantees downstream stages run with no network.
pub fn replay(store: &ResponseStore, job_id: &str) -> Result<ModelResponse, StoreError> {
    store
        .get(job_id)
        .ok_or_else(|| StoreError::NotFound(job_id.to_owned()))
}
