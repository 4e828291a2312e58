//! Plan runner: drives every job to a terminal state with per-provider
//! worker pools. Partial failure is data, not a crash; rerunning a plan
//! skips everything that already has an answer in the store.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use prompt_forge::SamplingJob;

use crate::provider::{GatewayError, Provider};
use crate::store::{ModelResponse, ResponseMeta, ResponseStatus, ResponseStore};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCounts {
    pub ok: usize,
    pub refused: usize,
    pub error: usize,
}

/// Per-run accounting: terminal states per (country, model), cache reuse
/// and the number of HTTP calls actually attempted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionReport {
    pub ok: usize,
    pub refused: usize,
    pub error: usize,
    pub cached: usize,
    pub provider_calls: u64,
    pub per_cell: BTreeMap<String, BTreeMap<String, StateCounts>>,
}

impl ExecutionReport {
    pub fn has_errors(&self) -> bool {
        self.error > 0
    }

    pub fn total(&self) -> usize {
        self.ok + self.refused + self.error
    }

    fn record(&mut self, job: &SamplingJob, status: ResponseStatus, from_cache: bool) {
        let cell = self
            .per_cell
            .entry(job.country.clone())
            .or_default()
            .entry(job.model_id.clone())
            .or_default();
        match status {
            ResponseStatus::Ok => {
                self.ok += 1;
                cell.ok += 1;
            }
            ResponseStatus::Refused => {
                self.refused += 1;
                cell.refused += 1;
            }
            ResponseStatus::Error => {
                self.error += 1;
                cell.error += 1;
            }
        }
        if from_cache {
            self.cached += 1;
        }
    }
}

/// Runs a plan to completion. Jobs whose model no provider serves fail
/// fast; everything else reaches ok, refused or error. Auth failures are
/// counted but never persisted; other failures are persisted as error
/// records so a later rerun retries them.
pub fn run_plan(
    providers: &[Provider],
    plan: &[SamplingJob],
    store: &ResponseStore,
) -> Result<ExecutionReport, GatewayError> {
    // Fail fast on unroutable models before any network traffic.
    for job in plan {
        if !providers.iter().any(|p| p.serves(&job.model_id)) {
            return Err(GatewayError::UnknownModel(job.model_id.clone()));
        }
    }

    let mut report = ExecutionReport::default();
    for provider in providers {
        let jobs: Vec<&SamplingJob> = plan
            .iter()
            .filter(|j| provider.serves(&j.model_id))
            .collect();
        if jobs.is_empty() {
            continue;
        }
        let next = AtomicUsize::new(0);
        let outcomes: Vec<Mutex<Option<(ResponseStatus, bool)>>> =
            jobs.iter().map(|_| Mutex::new(None)).collect();
        let workers = provider.config().parallelism.min(jobs.len());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= jobs.len() {
                        break;
                    }
                    let job = jobs[i];
                    let outcome = match provider.complete(job, store) {
                        Ok(done) => (done.response.status, done.from_cache),
                        Err(GatewayError::AuthMissing(_)) => (ResponseStatus::Error, false),
                        Err(e) => {
                            // Persist the failure so audits see it and a
                            // rerun retries it. Best effort: an unwritable
                            // store still yields an error state.
                            let _ = store.append(ModelResponse {
                                job_id: job.job_id.clone(),
                                text: String::new(),
                                status: ResponseStatus::Error,
                                error: Some(e.to_string()),
                                meta: ResponseMeta::default(),
                                fetched_at: 0,
                            });
                            (ResponseStatus::Error, false)
                        }
                    };
                    *outcomes[i].lock().expect("outcome slot") = Some(outcome);
                });
            }
        });
        for (job, slot) in jobs.iter().zip(outcomes) {
            let (status, from_cache) = slot
                .into_inner()
                .expect("outcome slot")
                .expect("every job reaches a terminal state");
            report.record(job, status, from_cache);
        }
    }
    report.provider_calls = providers.iter().map(Provider::calls_attempted).sum();
    Ok(report)
}
