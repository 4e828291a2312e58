//! Prompt template expansion and sampling plans.
//!
//! Seed questions are diversified over a (use case × syntactic variation)
//! grid; the variant texts are data, shipped as a CSV/JSONL asset, so a
//! different language or seed set is a drop-in replacement. A template set
//! crossed with countries, models and a temperature multiset yields a
//! deterministic, content-addressed sampling plan.

pub mod expand;
pub mod plan;
pub mod template;

pub use expand::{expand_templates, ExpandError, ExpansionGrid, SeedTemplates};
pub use plan::{
    build_sampling_plan, job_fingerprint, read_plan_jsonl, write_plan_jsonl, PlanError,
    SamplingJob, DEFAULT_TEMPERATURES,
};
pub use template::{
    group_seeds, load_template_rows_csv, load_template_rows_jsonl, read_templates_jsonl, render,
    write_templates_jsonl, PromptTemplate, RenderError, TemplateError, TemplateRow, UseCase,
    Variation, COUNTRY_PLACEHOLDER,
};
