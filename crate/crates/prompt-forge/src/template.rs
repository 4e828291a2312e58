//! Prompt templates and the raw asset rows they are loaded from.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The placeholder token every template carries exactly once.
pub const COUNTRY_PLACEHOLDER: &str = "<country>";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("template must contain exactly one `<country>` placeholder, found {got}")]
    PlaceholderCount { got: usize },
    #[error("unknown use case `{0}`")]
    UnknownUseCase(String),
    #[error("unknown syntactic variation `{0}`")]
    UnknownVariation(String),
    #[error("invalid seed id `{0}`")]
    BadSeedId(String),
    #[error("asset row {row}: {message}")]
    BadRow { row: usize, message: String },
    #[error("io: {0}")]
    Io(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("no display name configured for country `{0}`")]
    MissingDisplayName(String),
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum UseCase {
    Original,
    InformationSeeking,
    ContentGeneration,
}

impl UseCase {
    pub fn parse(raw: &str) -> Result<Self, TemplateError> {
        match raw.trim().to_lowercase().replace(' ', "_").as_str() {
            "original" => Ok(Self::Original),
            "information_seeking" => Ok(Self::InformationSeeking),
            "content_generation" => Ok(Self::ContentGeneration),
            _ => Err(TemplateError::UnknownUseCase(raw.to_owned())),
        }
    }

    fn code(self) -> &'static str {
        match self {
            Self::Original => "orig",
            Self::InformationSeeking => "is",
            Self::ContentGeneration => "cg",
        }
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Variation {
    Original,
    Active,
    Passive,
    Conjunction,
    Interrogation,
    Pronominalization,
    Imperative,
    Genitive,
    Relativization,
}

impl Variation {
    pub const NON_ORIGINAL: [Variation; 8] = [
        Variation::Active,
        Variation::Passive,
        Variation::Conjunction,
        Variation::Interrogation,
        Variation::Pronominalization,
        Variation::Imperative,
        Variation::Genitive,
        Variation::Relativization,
    ];

    pub fn parse(raw: &str) -> Result<Self, TemplateError> {
        match raw.trim().to_lowercase().as_str() {
            "original" => Ok(Self::Original),
            "active" => Ok(Self::Active),
            "passive" => Ok(Self::Passive),
            "conjunction" => Ok(Self::Conjunction),
            "interrogation" => Ok(Self::Interrogation),
            "pronominalization" => Ok(Self::Pronominalization),
            "imperative" => Ok(Self::Imperative),
            "genitive" => Ok(Self::Genitive),
            "relativization" => Ok(Self::Relativization),
            _ => Err(TemplateError::UnknownVariation(raw.to_owned())),
        }
    }

    fn code(self) -> &'static str {
        match self {
            Self::Original => "orig",
            Self::Active => "act",
            Self::Passive => "pas",
            Self::Conjunction => "con",
            Self::Interrogation => "int",
            Self::Pronominalization => "pro",
            Self::Imperative => "imp",
            Self::Genitive => "gen",
            Self::Relativization => "rel",
        }
    }
}

/// One diversified prompt. `(seed_id, use_case, variation)` is unique
/// within a template set and the text carries exactly one placeholder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub template_id: String,
    pub seed_id: u32,
    pub use_case: UseCase,
    pub variation: Variation,
    pub text: String,
    pub language: String,
}

impl PromptTemplate {
    pub fn new(
        seed_id: u32,
        use_case: UseCase,
        variation: Variation,
        text: String,
        language: &str,
    ) -> Result<Self, TemplateError> {
        let got = text.matches(COUNTRY_PLACEHOLDER).count();
        if got != 1 {
            return Err(TemplateError::PlaceholderCount { got });
        }
        let template_id = if use_case == UseCase::Original {
            format!("s{seed_id}-orig")
        } else {
            format!("s{seed_id}-{}-{}", use_case.code(), variation.code())
        };
        Ok(Self {
            template_id,
            seed_id,
            use_case,
            variation,
            text,
            language: language.to_owned(),
        })
    }
}

/// Substitutes the placeholder with the country's display name. Nothing
/// else in the text is touched.
pub fn render(
    template: &PromptTemplate,
    country: &str,
    display_names: &BTreeMap<String, String>,
) -> Result<String, RenderError> {
    let name = display_names
        .get(country)
        .ok_or_else(|| RenderError::MissingDisplayName(country.to_owned()))?;
    Ok(template.text.replacen(COUNTRY_PLACEHOLDER, name, 1))
}

/// Raw asset row, mirroring the shipped table columns plus the seed id.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TemplateRow {
    pub seed_id: u32,
    pub use_case: String,
    pub syntactic_variation: String,
    pub sentence: String,
}

pub fn load_template_rows_csv(reader: impl Read) -> Result<Vec<TemplateRow>, TemplateError> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for (i, record) in csv_reader.deserialize::<TemplateRow>().enumerate() {
        rows.push(record.map_err(|e| TemplateError::BadRow {
            row: i + 2, // header is line 1
            message: e.to_string(),
        })?);
    }
    Ok(rows)
}

pub fn load_template_rows_jsonl(reader: impl Read) -> Result<Vec<TemplateRow>, TemplateError> {
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| TemplateError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(
            serde_json::from_str(&line).map_err(|e| TemplateError::BadRow {
                row: i + 1,
                message: e.to_string(),
            })?,
        );
    }
    Ok(rows)
}

/// Regroups asset rows into per-seed variant tables, rejecting duplicate
/// `(seed, use_case, variation)` keys.
pub fn group_seeds(
    rows: &[TemplateRow],
) -> Result<Vec<crate::expand::SeedTemplates>, crate::expand::ExpandError> {
    crate::expand::SeedTemplates::group(rows)
}

pub fn write_templates_jsonl(
    templates: &[PromptTemplate],
    mut writer: impl Write,
) -> std::io::Result<()> {
    for template in templates {
        serde_json::to_writer(&mut writer, template)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_templates_jsonl(reader: impl Read) -> Result<Vec<PromptTemplate>, TemplateError> {
    let mut templates = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| TemplateError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let template: PromptTemplate =
            serde_json::from_str(&line).map_err(|e| TemplateError::BadRow {
                row: i + 1,
                message: e.to_string(),
            })?;
        // Re-validate the placeholder invariant on the way in.
        PromptTemplate::new(
            template.seed_id,
            template.use_case,
            template.variation,
            template.text.clone(),
            &template.language,
        )?;
        templates.push(template);
    }
    Ok(templates)
}
