//! HTTP provider adapter.
//!
//! Wire contract: POST `{"model": ..., "prompt": ..., "temperature": ...}`
//! and the provider replies `{"text": ...}`, optionally with
//! `"status": "refused"` for safety declines and token-count fields.
//! Transport failures, 429 and 5xx responses retry with exponential
//! backoff up to the configured budget; auth problems and other 4xx do
//! not. Auth tokens are named by environment variable and resolved at
//! call time, never persisted.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use prompt_forge::SamplingJob;

use crate::store::{ModelResponse, ResponseMeta, ResponseStatus, ResponseStore, StoreError};

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("provider {provider}: transport failure after {attempts} attempts: {message}")]
    Transport {
        provider: String,
        attempts: u32,
        message: String,
    },
    #[error("auth token variable `{0}` is not set (or was rejected with 401/403)")]
    AuthMissing(String),
    #[error("provider {provider} rejected the request with status {status}")]
    ProviderRejected { provider: String, status: u16 },
    #[error("provider {provider} broke the wire contract: {message}")]
    Protocol { provider: String, message: String },
    #[error("no provider serves model `{0}`")]
    UnknownModel(String),
    #[error("invalid provider config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// Provider connection settings. `models` maps the pipeline's logical
/// model ids onto the provider's native names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub provider_id: String,
    pub endpoint: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auth_env: Option<String>,
    pub models: BTreeMap<String, String>,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default = "default_backoff_ms")]
    pub backoff_ms: u64,
}

fn default_timeout_secs() -> u64 {
    60
}

fn default_max_retries() -> u32 {
    3
}

fn default_parallelism() -> usize {
    4
}

fn default_backoff_ms() -> u64 {
    250
}

impl ProviderConfig {
    pub fn validate(&self) -> Result<(), GatewayError> {
        if self.timeout_secs == 0 {
            return Err(GatewayError::InvalidConfig(format!(
                "provider {}: timeout must be positive",
                self.provider_id
            )));
        }
        if self.parallelism == 0 {
            return Err(GatewayError::InvalidConfig(format!(
                "provider {}: parallelism must be at least 1",
                self.provider_id
            )));
        }
        if self.models.is_empty() {
            return Err(GatewayError::InvalidConfig(format!(
                "provider {}: no models configured",
                self.provider_id
            )));
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct WireRequest<'a> {
    model: &'a str,
    prompt: &'a str,
    temperature: f64,
}

#[derive(Deserialize)]
struct WireReply {
    text: Option<String>,
    #[serde(default)]
    status: Option<String>,
    #[serde(default)]
    prompt_tokens: Option<u64>,
    #[serde(default)]
    completion_tokens: Option<u64>,
}

/// Result of [`Provider::complete`]: the response plus whether it came out
/// of the store without any network traffic.
#[derive(Debug, Clone)]
pub struct CompleteOutcome {
    pub response: ModelResponse,
    pub from_cache: bool,
}

#[derive(Debug)]
pub struct Provider {
    config: ProviderConfig,
    client: reqwest::blocking::Client,
    calls_attempted: AtomicU64,
}

impl Provider {
    pub fn new(config: ProviderConfig) -> Result<Self, GatewayError> {
        config.validate()?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| GatewayError::InvalidConfig(e.to_string()))?;
        Ok(Self {
            config,
            client,
            calls_attempted: AtomicU64::new(0),
        })
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.config
    }

    pub fn id(&self) -> &str {
        &self.config.provider_id
    }

    pub fn serves(&self, model_id: &str) -> bool {
        self.config.models.contains_key(model_id)
    }

    /// HTTP requests actually sent (cache hits excluded, retries counted).
    pub fn calls_attempted(&self) -> u64 {
        self.calls_attempted.load(Ordering::Relaxed)
    }

    /// Completes one job. A job already answered in the store (ok or
    /// refused) is returned as-is with zero network traffic; otherwise the
    /// provider is called and the response is persisted before it is
    /// returned.
    pub fn complete(
        &self,
        job: &SamplingJob,
        store: &ResponseStore,
    ) -> Result<CompleteOutcome, GatewayError> {
        if let Some(existing) = store.get(&job.job_id) {
            if existing.is_terminal_answer() {
                return Ok(CompleteOutcome {
                    response: existing,
                    from_cache: true,
                });
            }
        }
        let native_model = self
            .config
            .models
            .get(&job.model_id)
            .ok_or_else(|| GatewayError::UnknownModel(job.model_id.clone()))?;
        let auth_token = match &self.config.auth_env {
            Some(var) => Some(
                std::env::var(var).map_err(|_| GatewayError::AuthMissing(var.clone()))?,
            ),
            None => None,
        };
        let body = WireRequest {
            model: native_model,
            prompt: &job.rendered_prompt,
            temperature: job.temperature,
        };

        let started = Instant::now();
        let mut attempts: u32 = 0;
        let mut retries: u32 = 0;
        let mut last_error = String::new();
        while attempts <= self.config.max_retries {
            if attempts > 0 {
                retries = attempts;
                std::thread::sleep(Duration::from_millis(
                    self.config.backoff_ms.saturating_mul(1 << (attempts - 1).min(8)),
                ));
            }
            attempts += 1;
            self.calls_attempted.fetch_add(1, Ordering::Relaxed);

            let mut request = self.client.post(&self.config.endpoint).json(&body);
            if let Some(token) = &auth_token {
                request = request.bearer_auth(token);
            }
            let response = match request.send() {
                Ok(r) => r,
                Err(e) => {
                    last_error = e.to_string();
                    continue;
                }
            };
            let status = response.status();
            if status.as_u16() == 401 || status.as_u16() == 403 {
                return Err(GatewayError::AuthMissing(
                    self.config
                        .auth_env
                        .clone()
                        .unwrap_or_else(|| "<unset>".to_owned()),
                ));
            }
            if status.as_u16() == 429 || status.is_server_error() {
                last_error = format!("status {status}");
                continue;
            }
            if !status.is_success() {
                return Err(GatewayError::ProviderRejected {
                    provider: self.config.provider_id.clone(),
                    status: status.as_u16(),
                });
            }
            let reply: WireReply = response.json().map_err(|e| GatewayError::Protocol {
                provider: self.config.provider_id.clone(),
                message: e.to_string(),
            })?;
            let status = match reply.status.as_deref() {
                None | Some("ok") => ResponseStatus::Ok,
                Some("refused") => ResponseStatus::Refused,
                Some(other) => {
                    return Err(GatewayError::Protocol {
                        provider: self.config.provider_id.clone(),
                        message: format!("unknown status `{other}`"),
                    });
                }
            };
            let text = reply.text.unwrap_or_default();
            if status == ResponseStatus::Ok && text.trim().is_empty() {
                return Err(GatewayError::Protocol {
                    provider: self.config.provider_id.clone(),
                    message: "ok reply with empty text".to_owned(),
                });
            }
            let model_response = ModelResponse {
                job_id: job.job_id.clone(),
                text,
                status,
                error: None,
                meta: ResponseMeta {
                    latency_ms: started.elapsed().as_millis() as u64,
                    retries,
                    prompt_tokens: reply.prompt_tokens,
                    completion_tokens: reply.completion_tokens,
                },
                fetched_at: unix_now(),
            };
            store.append(model_response.clone())?;
            return Ok(CompleteOutcome {
                response: model_response,
                from_cache: false,
            });
        }
        Err(GatewayError::Transport {
            provider: self.config.provider_id.clone(),
            attempts,
            message: last_error,
        })
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
