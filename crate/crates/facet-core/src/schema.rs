//! Facet schemas: the fixed, ordered facet lists that give vector indices
//! their meaning, plus the alias table that folds rater-emitted names
//! (`"Cuisines"`, `"Customs"`, `"History"`, ...) onto canonical facets or a
//! discard bucket.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// The eleven canonical facets, in the fixed order used by every vector.
pub const CANONICAL_FACETS: [&str; 11] = [
    "Architecture/Physical Spaces",
    "Performance and Art",
    "Fashion/Style",
    "Events",
    "Cuisine",
    "Important Figures",
    "Communication",
    "Religious Rituals",
    "Sports",
    "Social Practices/Customs",
    "VNBM",
];

/// Name of the residual category used while counting survey labels.
pub const OTHER_FACET: &str = "Other";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchemaError {
    #[error("schema must declare at least one facet")]
    Empty,
    #[error("duplicate facet identifier `{0}`")]
    DuplicateFacet(String),
    #[error("alias `{alias}` points at unknown facet `{target}`")]
    UnknownAliasTarget { alias: String, target: String },
    #[error("alias `{0}` conflicts with a canonical facet name")]
    AliasShadowsFacet(String),
    #[error("alias `{0}` resolves to two targets")]
    ConflictingAlias(String),
    #[error("includes_other flag disagrees with the facet list")]
    OtherFlagMismatch,
    #[error("`{0}` has no alias resolution")]
    UnknownName(String),
    #[error("schema JSON is invalid: {0}")]
    Json(String),
}

/// Content hash of a schema. Two schemas with the same facets, aliases and
/// flag hash identically, so artifacts produced under one schema can be
/// checked against another run's schema without shipping the full object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SchemaId(String);

impl SchemaId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for SchemaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Where a raw (rater- or labeler-emitted) name lands after resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    /// Index of the canonical facet the name maps to.
    Facet(usize),
    /// The name is recognized but deliberately dropped (e.g. `History`).
    Discard,
}

/// External JSON form: `{"facets": [...], "aliases": {...}, "includes_other": bool}`.
/// An alias value of `null` marks the discard bucket.
#[derive(Serialize, Deserialize)]
struct SchemaDoc {
    facets: Vec<String>,
    aliases: BTreeMap<String, Option<String>>,
    includes_other: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetSchema {
    facets: Vec<String>,
    aliases: BTreeMap<String, Option<String>>,
    includes_other: bool,
    // lowercase canonical name -> index
    index: BTreeMap<String, usize>,
    id: SchemaId,
}

impl FacetSchema {
    pub fn new(
        facets: Vec<String>,
        aliases: BTreeMap<String, Option<String>>,
        includes_other: bool,
    ) -> Result<Self, SchemaError> {
        if facets.is_empty() {
            return Err(SchemaError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, facet) in facets.iter().enumerate() {
            if index.insert(normalize(facet), i).is_some() {
                return Err(SchemaError::DuplicateFacet(facet.clone()));
            }
        }
        if includes_other != index.contains_key(&normalize(OTHER_FACET)) {
            return Err(SchemaError::OtherFlagMismatch);
        }
        let mut seen = BTreeMap::new();
        for (alias, target) in &aliases {
            let key = normalize(alias);
            if index.contains_key(&key) {
                return Err(SchemaError::AliasShadowsFacet(alias.clone()));
            }
            if let Some(previous) = seen.insert(key, target.clone()) {
                if previous != *target {
                    return Err(SchemaError::ConflictingAlias(alias.clone()));
                }
            }
            if let Some(target) = target {
                if !index.contains_key(&normalize(target)) {
                    return Err(SchemaError::UnknownAliasTarget {
                        alias: alias.clone(),
                        target: target.clone(),
                    });
                }
            }
        }
        let id = hash_schema(&facets, &aliases, includes_other);
        Ok(Self {
            facets,
            aliases,
            includes_other,
            index,
            id,
        })
    }

    /// The 11-facet schema used for all metric computation. `History` and
    /// `Other` resolve to the discard bucket.
    pub fn canonical_11() -> Self {
        let mut aliases = default_aliases();
        aliases.insert("Other".to_owned(), None);
        Self::new(
            CANONICAL_FACETS.iter().map(|s| (*s).to_owned()).collect(),
            aliases,
            false,
        )
        .expect("canonical 11-facet schema is valid")
    }

    /// The 12-category schema used while counting survey labels: the 11
    /// canonical facets plus `Other` as a real category.
    pub fn canonical_12() -> Self {
        let mut facets: Vec<String> = CANONICAL_FACETS.iter().map(|s| (*s).to_owned()).collect();
        facets.push(OTHER_FACET.to_owned());
        Self::new(facets, default_aliases(), true).expect("canonical 12-category schema is valid")
    }

    pub fn facets(&self) -> &[String] {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn includes_other(&self) -> bool {
        self.includes_other
    }

    pub fn id(&self) -> &SchemaId {
        &self.id
    }

    pub fn facet_name(&self, index: usize) -> &str {
        &self.facets[index]
    }

    /// Index of a canonical facet, matched case-insensitively.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(&normalize(name)).copied()
    }

    /// Resolves a raw name: canonical facets win, then the alias table.
    pub fn resolve(&self, name: &str) -> Result<Resolution, SchemaError> {
        let key = normalize(name);
        if let Some(&i) = self.index.get(&key) {
            return Ok(Resolution::Facet(i));
        }
        for (alias, target) in &self.aliases {
            if normalize(alias) == key {
                return Ok(match target {
                    Some(target) => Resolution::Facet(
                        self.position(target).expect("alias target was validated"),
                    ),
                    None => Resolution::Discard,
                });
            }
        }
        Err(SchemaError::UnknownName(name.to_owned()))
    }

    pub fn to_json(&self) -> String {
        let doc = SchemaDoc {
            facets: self.facets.clone(),
            aliases: self.aliases.clone(),
            includes_other: self.includes_other,
        };
        serde_json::to_string_pretty(&doc).expect("schema serializes")
    }

    pub fn from_json(json: &str) -> Result<Self, SchemaError> {
        let doc: SchemaDoc =
            serde_json::from_str(json).map_err(|e| SchemaError::Json(e.to_string()))?;
        Self::new(doc.facets, doc.aliases, doc.includes_other)
    }

    pub fn from_reader(mut reader: impl Read) -> Result<Self, SchemaError> {
        let mut buf = String::new();
        reader
            .read_to_string(&mut buf)
            .map_err(|e| SchemaError::Json(e.to_string()))?;
        Self::from_json(&buf)
    }
}

/// Aliases shared by every canonical schema; keys are matched
/// case-insensitively.
fn default_aliases() -> BTreeMap<String, Option<String>> {
    let mut aliases = BTreeMap::new();
    let mut canonical = |from: &str, to: &str| {
        aliases.insert(from.to_owned(), Some(to.to_owned()));
    };
    canonical("Cuisines", "Cuisine");
    canonical("Architecture", "Architecture/Physical Spaces");
    canonical("Customs", "Social Practices/Customs");
    canonical("Social Prac./Customs", "Social Practices/Customs");
    canonical("VNBM (Values, Norms, Beliefs, Morality)", "VNBM");
    canonical("Values, Norms, Beliefs, Morality", "VNBM");
    // The facet-detection contract lists History; the metric schema has no
    // such axis, so it is dropped unless a caller remaps it.
    aliases.insert("History".to_owned(), None);
    aliases
}

fn normalize(name: &str) -> String {
    name.trim().to_lowercase()
}

fn hash_schema(
    facets: &[String],
    aliases: &BTreeMap<String, Option<String>>,
    includes_other: bool,
) -> SchemaId {
    let mut hasher = Sha256::new();
    for facet in facets {
        hasher.update(facet.as_bytes());
        hasher.update([0x1f]);
    }
    hasher.update([0x1e]);
    for (alias, target) in aliases {
        hasher.update(normalize(alias).as_bytes());
        hasher.update([0x1f]);
        match target {
            Some(t) => hasher.update(normalize(t).as_bytes()),
            None => hasher.update(b"\x00discard"),
        }
        hasher.update([0x1f]);
    }
    hasher.update([includes_other as u8]);
    SchemaId(hex(&hasher.finalize()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_11_has_exactly_the_eleven_facets() {
        let schema = FacetSchema::canonical_11();
        assert_eq!(schema.len(), 11);
        assert_eq!(schema.facets(), &CANONICAL_FACETS);
        assert!(!schema.includes_other());
    }

    #[test]
    fn canonical_12_appends_other() {
        let schema = FacetSchema::canonical_12();
        assert_eq!(schema.len(), 12);
        assert_eq!(schema.facet_name(11), OTHER_FACET);
        assert!(schema.includes_other());
    }

    #[test]
    fn resolve_prefers_canonical_then_aliases() {
        let schema = FacetSchema::canonical_12();
        assert_eq!(schema.resolve("Cuisine").unwrap(), Resolution::Facet(4));
        assert_eq!(schema.resolve("Cuisines").unwrap(), Resolution::Facet(4));
        assert_eq!(schema.resolve(" customs ").unwrap(), Resolution::Facet(9));
        assert_eq!(schema.resolve("OTHER").unwrap(), Resolution::Facet(11));
        assert_eq!(schema.resolve("History").unwrap(), Resolution::Discard);
        assert!(schema.resolve("Astrology").is_err());
    }

    #[test]
    fn other_resolves_to_discard_in_the_11_schema() {
        let schema = FacetSchema::canonical_11();
        assert_eq!(schema.resolve("Other").unwrap(), Resolution::Discard);
    }

    #[test]
    fn duplicate_facets_rejected() {
        let err = FacetSchema::new(
            vec!["Cuisine".into(), "cuisine".into()],
            BTreeMap::new(),
            false,
        )
        .unwrap_err();
        assert_eq!(err, SchemaError::DuplicateFacet("cuisine".into()));
    }

    #[test]
    fn alias_shadowing_a_facet_rejected() {
        let mut aliases = BTreeMap::new();
        aliases.insert("Cuisine".to_owned(), Some("Sports".to_owned()));
        let err = FacetSchema::new(
            vec!["Cuisine".into(), "Sports".into()],
            aliases,
            false,
        )
        .unwrap_err();
        assert_eq!(err, SchemaError::AliasShadowsFacet("Cuisine".into()));
    }

    #[test]
    fn alias_to_unknown_target_rejected() {
        let mut aliases = BTreeMap::new();
        aliases.insert("Food".to_owned(), Some("Cooking".to_owned()));
        let err =
            FacetSchema::new(vec!["Cuisine".into()], aliases, false).unwrap_err();
        assert!(matches!(err, SchemaError::UnknownAliasTarget { .. }));
    }

    #[test]
    fn other_flag_must_match_facet_list() {
        let err = FacetSchema::new(vec!["Cuisine".into()], BTreeMap::new(), true).unwrap_err();
        assert_eq!(err, SchemaError::OtherFlagMismatch);
    }

    #[test]
    fn json_round_trip_preserves_id() {
        let schema = FacetSchema::canonical_12();
        let restored = FacetSchema::from_json(&schema.to_json()).unwrap();
        assert_eq!(restored, schema);
        assert_eq!(restored.id(), schema.id());
    }

    #[test]
    fn ids_differ_when_aliases_differ() {
        let base = FacetSchema::canonical_11();
        let mut aliases = default_aliases();
        aliases.insert("Other".to_owned(), None);
        aliases.insert("History".to_owned(), Some("VNBM".to_owned()));
        let remapped = FacetSchema::new(
            CANONICAL_FACETS.iter().map(|s| (*s).to_owned()).collect(),
            aliases,
            false,
        )
        .unwrap();
        assert_ne!(base.id(), remapped.id());
    }
}
