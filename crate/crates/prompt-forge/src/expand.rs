//! Expansion of seed questions over the diversification grid.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::template::{PromptTemplate, TemplateError, TemplateRow, UseCase, Variation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpandError {
    #[error("seed {seed_id} has no text for ({use_case:?}, {variation:?})")]
    MissingCell {
        seed_id: u32,
        use_case: UseCase,
        variation: Variation,
    },
    #[error("seed {0} has no original form")]
    MissingOriginal(u32),
    #[error("duplicate template for seed {seed_id} at ({use_case:?}, {variation:?})")]
    DuplicateTemplate {
        seed_id: u32,
        use_case: UseCase,
        variation: Variation,
    },
    #[error(transparent)]
    Template(#[from] TemplateError),
}

/// The non-original axes of the diversification grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionGrid {
    pub use_cases: Vec<UseCase>,
    pub variations: Vec<Variation>,
}

impl ExpansionGrid {
    /// Information seeking and content generation crossed with the eight
    /// syntactic variations: 16 cells per seed, 17 templates with the
    /// original.
    pub fn default_grid() -> Self {
        Self {
            use_cases: vec![UseCase::InformationSeeking, UseCase::ContentGeneration],
            variations: Variation::NON_ORIGINAL.to_vec(),
        }
    }

    pub fn empty() -> Self {
        Self {
            use_cases: Vec::new(),
            variations: Vec::new(),
        }
    }

    /// Templates each seed contributes: the original plus one per cell.
    pub fn templates_per_seed(&self) -> usize {
        1 + self.use_cases.len() * self.variations.len()
    }
}

/// One seed question with its per-cell variant texts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedTemplates {
    pub seed_id: u32,
    pub original: String,
    pub variants: BTreeMap<(UseCase, Variation), String>,
}

impl SeedTemplates {
    /// Groups raw asset rows by seed, validating key uniqueness.
    pub fn group(rows: &[TemplateRow]) -> Result<Vec<SeedTemplates>, ExpandError> {
        let mut seeds: BTreeMap<u32, SeedTemplates> = BTreeMap::new();
        for row in rows {
            let use_case = UseCase::parse(&row.use_case)?;
            let variation = Variation::parse(&row.syntactic_variation)?;
            let entry = seeds.entry(row.seed_id).or_insert_with(|| SeedTemplates {
                seed_id: row.seed_id,
                original: String::new(),
                variants: BTreeMap::new(),
            });
            if use_case == UseCase::Original {
                if !entry.original.is_empty() {
                    return Err(ExpandError::DuplicateTemplate {
                        seed_id: row.seed_id,
                        use_case,
                        variation,
                    });
                }
                entry.original = row.sentence.clone();
            } else if entry
                .variants
                .insert((use_case, variation), row.sentence.clone())
                .is_some()
            {
                return Err(ExpandError::DuplicateTemplate {
                    seed_id: row.seed_id,
                    use_case,
                    variation,
                });
            }
        }
        Ok(seeds.into_values().collect())
    }
}

/// Emits every (seed, grid cell) template plus each seed's original:
/// `|seeds| * (1 + |use_cases| * |variations|)` templates in total.
pub fn expand_templates(
    seeds: &[SeedTemplates],
    grid: &ExpansionGrid,
    language: &str,
) -> Result<Vec<PromptTemplate>, ExpandError> {
    let mut templates = Vec::with_capacity(seeds.len() * grid.templates_per_seed());
    for seed in seeds {
        if seed.original.is_empty() {
            return Err(ExpandError::MissingOriginal(seed.seed_id));
        }
        templates.push(PromptTemplate::new(
            seed.seed_id,
            UseCase::Original,
            Variation::Original,
            seed.original.clone(),
            language,
        )?);
        for &use_case in &grid.use_cases {
            for &variation in &grid.variations {
                let text = seed.variants.get(&(use_case, variation)).ok_or(
                    ExpandError::MissingCell {
                        seed_id: seed.seed_id,
                        use_case,
                        variation,
                    },
                )?;
                templates.push(PromptTemplate::new(
                    seed.seed_id,
                    use_case,
                    variation,
                    text.clone(),
                    language,
                )?);
            }
        }
    }
    Ok(templates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(id: u32, cells: &[(UseCase, Variation, &str)]) -> SeedTemplates {
        SeedTemplates {
            seed_id: id,
            original: format!("Seed {id} about <country>."),
            variants: cells
                .iter()
                .map(|(u, v, t)| ((*u, *v), (*t).to_owned()))
                .collect(),
        }
    }

    #[test]
    fn single_seed_with_empty_grid_yields_the_original() {
        let templates =
            expand_templates(&[seed(1, &[])], &ExpansionGrid::empty(), "en").unwrap();
        assert_eq!(templates.len(), 1);
        assert_eq!(templates[0].template_id, "s1-orig");
    }

    #[test]
    fn missing_cell_is_reported() {
        let grid = ExpansionGrid {
            use_cases: vec![UseCase::InformationSeeking],
            variations: vec![Variation::Active, Variation::Passive],
        };
        let s = seed(
            2,
            &[(UseCase::InformationSeeking, Variation::Active, "A <country> x.")],
        );
        let err = expand_templates(&[s], &grid, "en").unwrap_err();
        assert_eq!(
            err,
            ExpandError::MissingCell {
                seed_id: 2,
                use_case: UseCase::InformationSeeking,
                variation: Variation::Passive,
            }
        );
    }

    #[test]
    fn duplicate_rows_are_rejected_in_grouping() {
        let rows = vec![
            TemplateRow {
                seed_id: 1,
                use_case: "information_seeking".into(),
                syntactic_variation: "active".into(),
                sentence: "About <country>.".into(),
            },
            TemplateRow {
                seed_id: 1,
                use_case: "information seeking".into(),
                syntactic_variation: "Active".into(),
                sentence: "Also about <country>.".into(),
            },
        ];
        let err = SeedTemplates::group(&rows).unwrap_err();
        assert!(matches!(err, ExpandError::DuplicateTemplate { .. }));
    }

    #[test]
    fn count_formula_holds_for_arbitrary_grids() {
        for n_seeds in 1..4u32 {
            for n_uc in 0..3usize {
                for n_var in 0..4usize {
                    let grid = ExpansionGrid {
                        use_cases: [UseCase::InformationSeeking, UseCase::ContentGeneration]
                            [..n_uc]
                            .to_vec(),
                        variations: Variation::NON_ORIGINAL[..n_var].to_vec(),
                    };
                    let seeds: Vec<SeedTemplates> = (1..=n_seeds)
                        .map(|id| {
                            let cells: Vec<(UseCase, Variation, String)> = grid
                                .use_cases
                                .iter()
                                .flat_map(|&u| {
                                    grid.variations
                                        .iter()
                                        .map(move |&v| (u, v, format!("{u:?} {v:?} <country>")))
                                })
                                .collect();
                            SeedTemplates {
                                seed_id: id,
                                original: "Original <country>.".into(),
                                variants: cells
                                    .into_iter()
                                    .map(|(u, v, t)| ((u, v), t))
                                    .collect(),
                            }
                        })
                        .collect();
                    let templates = expand_templates(&seeds, &grid, "en").unwrap();
                    assert_eq!(
                        templates.len(),
                        n_seeds as usize * (1 + n_uc * n_var),
                        "seeds={n_seeds} uc={n_uc} var={n_var}"
                    );
                }
            }
        }
    }
}
