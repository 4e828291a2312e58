//! Sampling plans: the full (template × country × model × temperature)
//! cross product, each job addressed by a stable content fingerprint.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::template::{render, PromptTemplate, RenderError};

/// One greedy sample, three mid-temperature samples told apart by their
/// sample index, and one high-temperature sample per template.
pub const DEFAULT_TEMPERATURES: [f64; 5] = [0.0, 0.5, 0.5, 0.5, 1.0];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("empty {0} axis")]
    EmptyAxis(&'static str),
    #[error("temperature {0} outside [0, 1]")]
    TemperatureRange(String),
    #[error("duplicate job id {0} (repeated axis value?)")]
    DuplicateJob(String),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("plan line {line}: {message}")]
    BadLine { line: usize, message: String },
    #[error("io: {0}")]
    Io(String),
}

/// One sampling request. `job_id` is a stable hash of
/// (template_id, country, model_id, temperature, sample_index), so
/// identical plans address identical cache entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingJob {
    pub job_id: String,
    pub template_id: String,
    pub country: String,
    pub model_id: String,
    pub temperature: f64,
    pub sample_index: u32,
    pub rendered_prompt: String,
}

/// Stable content fingerprint for a job. Temperatures are formatted with
/// the shortest round-trip float representation, which is identical across
/// runs and platforms.
pub fn job_fingerprint(
    template_id: &str,
    country: &str,
    model_id: &str,
    temperature: f64,
    sample_index: u32,
) -> String {
    let mut hasher = Sha256::new();
    hasher.update(template_id.as_bytes());
    hasher.update([0x1f]);
    hasher.update(country.as_bytes());
    hasher.update([0x1f]);
    hasher.update(model_id.as_bytes());
    hasher.update([0x1f]);
    hasher.update(format!("{temperature}").as_bytes());
    hasher.update([0x1f]);
    hasher.update(format!("{sample_index}").as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Builds the deterministic plan: |templates| × |temperatures| jobs per
/// (country, model), sorted by job id.
pub fn build_sampling_plan(
    templates: &[PromptTemplate],
    countries: &[String],
    models: &[String],
    temperatures: &[f64],
    display_names: &BTreeMap<String, String>,
) -> Result<Vec<SamplingJob>, PlanError> {
    if templates.is_empty() {
        return Err(PlanError::EmptyAxis("template"));
    }
    if countries.is_empty() {
        return Err(PlanError::EmptyAxis("country"));
    }
    if models.is_empty() {
        return Err(PlanError::EmptyAxis("model"));
    }
    if temperatures.is_empty() {
        return Err(PlanError::EmptyAxis("temperature"));
    }
    for &t in temperatures {
        if !(0.0..=1.0).contains(&t) {
            return Err(PlanError::TemperatureRange(format!("{t}")));
        }
    }
    let mut jobs = Vec::with_capacity(
        templates.len() * countries.len() * models.len() * temperatures.len(),
    );
    for template in templates {
        for country in countries {
            let rendered_prompt = render(template, country, display_names)?;
            for model_id in models {
                for (sample_index, &temperature) in temperatures.iter().enumerate() {
                    let sample_index = sample_index as u32;
                    jobs.push(SamplingJob {
                        job_id: job_fingerprint(
                            &template.template_id,
                            country,
                            model_id,
                            temperature,
                            sample_index,
                        ),
                        template_id: template.template_id.clone(),
                        country: country.clone(),
                        model_id: model_id.clone(),
                        temperature,
                        sample_index,
                        rendered_prompt: rendered_prompt.clone(),
                    });
                }
            }
        }
    }
    jobs.sort_by(|a, b| a.job_id.cmp(&b.job_id));
    if let Some(dup) = jobs.windows(2).find(|w| w[0].job_id == w[1].job_id) {
        return Err(PlanError::DuplicateJob(dup[0].job_id.clone()));
    }
    Ok(jobs)
}

pub fn write_plan_jsonl(plan: &[SamplingJob], mut writer: impl Write) -> std::io::Result<()> {
    for job in plan {
        serde_json::to_writer(&mut writer, job)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_plan_jsonl(reader: impl Read) -> Result<Vec<SamplingJob>, PlanError> {
    let mut plan = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| PlanError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        plan.push(
            serde_json::from_str(&line).map_err(|e| PlanError::BadLine {
                line: i + 1,
                message: e.to_string(),
            })?,
        );
    }
    Ok(plan)
}
