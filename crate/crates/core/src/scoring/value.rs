//! Value correctness under the two protocols.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bleu::{bleu, DEFAULT_MAX_N};
use crate::agent::dsl::{parse_actions, typed_texts};
use crate::schema::{FieldType, FormSchema};
use crate::values::MULTI_SEPARATOR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueMetric {
    Exact,
    Bleu,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueVerdict {
    pub field_id: String,
    pub value_correct: bool,
    pub value_metric: ValueMetric,
    pub bleu_score: Option<f64>,
}

impl ValueVerdict {
    fn exact(field_id: &str, correct: bool) -> ValueVerdict {
        ValueVerdict {
            field_id: field_id.to_string(),
            value_correct: correct,
            value_metric: ValueMetric::Exact,
            bleu_score: None,
        }
    }

    fn bleu(field_id: &str, score: f64) -> ValueVerdict {
        ValueVerdict {
            field_id: field_id.to_string(),
            value_correct: score > 0.0,
            value_metric: ValueMetric::Bleu,
            bleu_score: Some(score),
        }
    }
}

/// Output-scan normal form: trimmed, whitespace collapsed, case-folded, with
/// one layer of surrounding quotes removed.
pub fn scan_normalize(text: &str) -> String {
    let collapsed = text
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase();
    for q in ['"', '\''] {
        if collapsed.len() >= 2 && collapsed.starts_with(q) && collapsed.ends_with(q) {
            return collapsed[1..collapsed.len() - 1].trim().to_string();
        }
    }
    collapsed
}

/// Values shorter than this must match on token boundaries.
pub const SHORT_VALUE_CHARS: usize = 3;

/// Does normalized `needle` occur in normalized `haystack`?
pub fn occurs(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    if needle.chars().count() >= SHORT_VALUE_CHARS {
        return haystack.contains(needle);
    }
    haystack.match_indices(needle).any(|(i, m)| {
        let before = haystack[..i].chars().next_back();
        let after = haystack[i + m.len()..].chars().next();
        !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric)
    })
}

fn outputscan_occurs(haystack: &str, field_type: FieldType, gold: &str) -> bool {
    let whole = scan_normalize(gold);
    if occurs(haystack, &whole) {
        return true;
    }
    field_type == FieldType::MultipleChoice
        && gold
            .split(MULTI_SEPARATOR)
            .all(|part| occurs(haystack, &scan_normalize(part)))
}

/// Scores every scored field that has a gold value against the model's raw
/// output (all pages concatenated).
///
/// A non-description field is correct when its gold value occurs anywhere in
/// the output or in the text its `TYPE` actions would enter; a multi-select
/// also counts when each selected option occurs. Description fields are
/// scored by the best BLEU of any typed text.
pub fn score_value_outputscan(
    schema: &FormSchema,
    raw_model_output: &str,
    gold: &BTreeMap<String, String>,
) -> Vec<ValueVerdict> {
    let typed = typed_texts(&parse_actions(raw_model_output).actions);
    let mut haystack = String::from(raw_model_output);
    for t in &typed {
        haystack.push('\n');
        haystack.push_str(t);
    }
    let haystack = scan_normalize(&haystack);
    schema
        .scored_fields()
        .filter_map(|field| {
            let g = gold.get(&field.field_id)?;
            Some(if field.field_type == FieldType::Description {
                let best = typed
                    .iter()
                    .map(|t| bleu(t, g, DEFAULT_MAX_N))
                    .fold(0.0, f64::max);
                ValueVerdict::bleu(&field.field_id, best)
            } else {
                ValueVerdict::exact(
                    &field.field_id,
                    outputscan_occurs(&haystack, field.field_type, g),
                )
            })
        })
        .collect()
}

/// Scores the values actually held by the session's fields at submit.
pub fn score_value_statestrict(
    schema: &FormSchema,
    extracted: &BTreeMap<String, String>,
    gold: &BTreeMap<String, String>,
) -> Vec<ValueVerdict> {
    schema
        .scored_fields()
        .filter_map(|field| {
            let g = gold.get(&field.field_id)?;
            let got = extracted.get(&field.field_id);
            Some(if field.field_type == FieldType::Description {
                ValueVerdict::bleu(
                    &field.field_id,
                    got.map_or(0.0, |t| bleu(t, g, DEFAULT_MAX_N)),
                )
            } else {
                ValueVerdict::exact(&field.field_id, got == Some(g))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{DomainCategory, FieldSpec};

    fn schema() -> FormSchema {
        FormSchema {
            form_id: "t".into(),
            name: "T".into(),
            domain_category: DomainCategory::ProfessionalBusiness,
            page_count: 1,
            theme_id: "plain".into(),
            fields: vec![
                FieldSpec::new("city", "City", FieldType::StringInput),
                FieldSpec::new("size", "Size", FieldType::Dropdown).with_options(["S", "M", "L"]),
                FieldSpec::new("langs", "Languages", FieldType::MultipleChoice)
                    .with_options(["Rust", "Go", "Python"]),
                FieldSpec::new("bio", "Bio", FieldType::Description),
            ],
        }
    }

    fn gold() -> BTreeMap<String, String> {
        BTreeMap::from([
            ("city".into(), "Berlin".into()),
            ("size".into(), "M".into()),
            ("langs".into(), "Rust;Python".into()),
            (
                "bio".into(),
                "I build quiet sensor networks for rural communities.".into(),
            ),
        ])
    }

    fn correct(vs: &[ValueVerdict], id: &str) -> bool {
        vs.iter().find(|v| v.field_id == id).unwrap().value_correct
    }

    #[test]
    fn typed_value_counts() {
        let v = score_value_outputscan(&schema(), "CLICK(1, 2)\nTYPE(\"Berlin\")", &gold());
        assert!(correct(&v, "city"));
    }

    #[test]
    fn mention_in_prose_counts() {
        let v = score_value_outputscan(&schema(), "I think the city is  \"berlin\" here.", &gold());
        assert!(correct(&v, "city"));
    }

    #[test]
    fn empty_output_scores_nothing() {
        let v = score_value_outputscan(&schema(), "", &gold());
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|v| !v.value_correct));
        let bio = v.iter().find(|v| v.field_id == "bio").unwrap();
        assert_eq!(bio.bleu_score, Some(0.0));
        assert_eq!(bio.value_metric, ValueMetric::Bleu);
    }

    #[test]
    fn short_values_need_token_boundaries() {
        let v = score_value_outputscan(&schema(), "CLICK(1, 2) # Medium", &gold());
        assert!(!correct(&v, "size"));
        let v = score_value_outputscan(&schema(), "# size: M", &gold());
        assert!(correct(&v, "size"));
    }

    #[test]
    fn multi_select_by_components() {
        let v = score_value_outputscan(&schema(), "# tick Python and rust", &gold());
        assert!(correct(&v, "langs"));
        let v = score_value_outputscan(&schema(), "# tick Python", &gold());
        assert!(!correct(&v, "langs"));
    }

    #[test]
    fn description_uses_best_typed_text() {
        let out = "TYPE(\"I build quiet sensor\")\nTYPE(\" networks for rural communities.\")";
        let v = score_value_outputscan(&schema(), out, &gold());
        let bio = v.iter().find(|v| v.field_id == "bio").unwrap();
        assert_eq!(bio.bleu_score, Some(1.0));
    }

    #[test]
    fn state_strict_exact() {
        let mut extracted = gold();
        let v = score_value_statestrict(&schema(), &extracted, &gold());
        assert!(v.iter().all(|v| v.value_correct));
        extracted.insert("city".into(), "berlin".into());
        extracted.remove("bio");
        let v = score_value_statestrict(&schema(), &extracted, &gold());
        assert!(!correct(&v, "city") && !correct(&v, "bio"));
    }
}
