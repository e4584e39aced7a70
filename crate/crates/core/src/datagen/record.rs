use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Templated,
    LlmGenerated,
    Ingested,
}

/// One benchmark sample: the user-side context document and the gold value
/// of every scored field, as canonical strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldRecord {
    pub sample_id: String,
    pub form_id: String,
    pub context_document: String,
    pub gold: BTreeMap<String, String>,
    pub provenance: Provenance,
}

impl GoldRecord {
    /// Record with no gold values, for free-form sessions.
    pub fn blank(form_id: &str) -> GoldRecord {
        GoldRecord {
            sample_id: format!("{form_id}-blank"),
            form_id: form_id.to_string(),
            context_document: String::new(),
            gold: BTreeMap::new(),
            provenance: Provenance::Templated,
        }
    }
}
