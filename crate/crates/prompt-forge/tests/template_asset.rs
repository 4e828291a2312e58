//! The shipped English template asset must expand to the full 85-template
//! set and drive the documented corpus arithmetic.

use std::collections::BTreeMap;
use std::fs::File;

use prompt_forge::{
    build_sampling_plan, expand_templates, group_seeds, load_template_rows_csv, render,
    ExpansionGrid, UseCase, Variation, DEFAULT_TEMPERATURES,
};

fn asset_path() -> String {
    format!(
        "{}/../../fixtures/templates_en.csv",
        env!("CARGO_MANIFEST_DIR")
    )
}

fn study_countries() -> (Vec<String>, BTreeMap<String, String>) {
    let pairs = [
        ("BR", "Brazil"),
        ("FR", "France"),
        ("DE", "Germany"),
        ("IN", "India"),
        ("ID", "Indonesia"),
        ("IT", "Italy"),
        ("JP", "Japan"),
        ("MX", "Mexico"),
        ("KR", "South Korea"),
    ];
    (
        pairs.iter().map(|(c, _)| (*c).to_owned()).collect(),
        pairs
            .iter()
            .map(|(c, n)| ((*c).to_owned(), (*n).to_owned()))
            .collect(),
    )
}

#[test]
fn shipped_asset_expands_to_85_templates() {
    let rows = load_template_rows_csv(File::open(asset_path()).unwrap()).unwrap();
    assert_eq!(rows.len(), 85);
    let seeds = group_seeds(&rows).unwrap();
    assert_eq!(seeds.len(), 5);
    let templates = expand_templates(&seeds, &ExpansionGrid::default_grid(), "en").unwrap();
    assert_eq!(templates.len(), 85);

    let mut ids: Vec<&str> = templates.iter().map(|t| t.template_id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), 85);
}

#[test]
fn known_grid_cells_carry_the_expected_texts() {
    let rows = load_template_rows_csv(File::open(asset_path()).unwrap()).unwrap();
    let seeds = group_seeds(&rows).unwrap();
    let templates = expand_templates(&seeds, &ExpansionGrid::default_grid(), "en").unwrap();

    let seed3_imp = templates
        .iter()
        .find(|t| {
            t.seed_id == 3
                && t.use_case == UseCase::InformationSeeking
                && t.variation == Variation::Imperative
        })
        .unwrap();
    assert_eq!(seed3_imp.text, "Tell me about <country>");

    let seed5_gen = templates
        .iter()
        .find(|t| {
            t.seed_id == 5
                && t.use_case == UseCase::InformationSeeking
                && t.variation == Variation::Genitive
        })
        .unwrap();
    assert_eq!(seed5_gen.text, "<country>'s description, provide it.");

    let (_, names) = study_countries();
    assert_eq!(
        render(seed3_imp, "JP", &names).unwrap(),
        "Tell me about Japan"
    );
    assert_eq!(
        render(seed5_gen, "BR", &names).unwrap(),
        "Brazil's description, provide it."
    );
}

#[test]
fn full_study_plan_has_425_jobs_per_cell_and_11475_total() {
    let rows = load_template_rows_csv(File::open(asset_path()).unwrap()).unwrap();
    let seeds = group_seeds(&rows).unwrap();
    let templates = expand_templates(&seeds, &ExpansionGrid::default_grid(), "en").unwrap();
    let (countries, names) = study_countries();
    let models: Vec<String> = ["model-a", "model-b", "model-c"]
        .iter()
        .map(|m| (*m).to_owned())
        .collect();

    let plan =
        build_sampling_plan(&templates, &countries, &models, &DEFAULT_TEMPERATURES, &names)
            .unwrap();
    assert_eq!(plan.len(), 11_475);
    for country in &countries {
        for model in &models {
            let n = plan
                .iter()
                .filter(|j| &j.country == country && &j.model_id == model)
                .count();
            assert_eq!(n, 425);
        }
    }
    // Plan order is the job-id order.
    assert!(plan.windows(2).all(|w| w[0].job_id < w[1].job_id));
}
