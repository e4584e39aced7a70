//! Ingestion of already-extracted paper metadata as gold records.

use std::collections::BTreeMap;

use serde_json::Value;
use sha2::{Digest, Sha256};

use super::context::enforce_containment;
use super::sampler::PLACEHOLDER_EMAIL_DOMAIN;
use super::{DatagenError, GoldRecord, Provenance};
use crate::schema::{FieldType, FormSchema};
use crate::values::{canonicalize_text, normalize_whitespace};

/// Keys that may carry a record's full text.
const BODY_KEYS: &[&str] = &["body", "text", "full_text"];

fn as_text(value: &Value) -> Option<String> {
    match value {
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().filter_map(as_text).collect();
            (!parts.is_empty()).then(|| parts.join(", "))
        }
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Replaces a real address with a stable placeholder on the reserved domain.
pub fn anonymize_email(email: &str) -> String {
    if email.ends_with(&format!("@{PLACEHOLDER_EMAIL_DOMAIN}")) {
        return email.to_string();
    }
    let tag = hex::encode(&Sha256::digest(email.as_bytes())[..4]);
    format!("author.{tag}@{PLACEHOLDER_EMAIL_DOMAIN}")
}

/// Turns metadata records into gold records for `schema`.
///
/// Every scored field of the schema must be present in every record; array
/// values (author lists, keyword lists) are joined with `", "`. Email
/// addresses are replaced with placeholders, in the gold map and the body.
pub fn ingest_metadata_records(
    schema: &FormSchema,
    records: &[Value],
) -> Result<Vec<GoldRecord>, DatagenError> {
    let mut out = Vec::with_capacity(records.len());
    for (i, record) in records.iter().enumerate() {
        let record_id = record
            .get("id")
            .and_then(as_text)
            .map(|id| format!("{}-{}", schema.form_id, id))
            .unwrap_or_else(|| format!("{}-ingested-{:04}", schema.form_id, i));
        let mut gold = BTreeMap::new();
        let mut replacements = Vec::new();
        for field in schema.scored_fields() {
            let raw = record
                .get(&field.field_id)
                .and_then(as_text)
                .map(|t| normalize_whitespace(&t))
                .filter(|t| !t.is_empty())
                .ok_or_else(|| DatagenError::MissingField {
                    record: record_id.clone(),
                    field: field.field_id.clone(),
                })?;
            let value = if field.field_type.has_options() {
                let option = field
                    .options
                    .iter()
                    .find(|o| o.eq_ignore_ascii_case(&raw))
                    .ok_or_else(|| DatagenError::InvalidValue {
                        record: record_id.clone(),
                        field: field.field_id.clone(),
                        value: raw.clone(),
                    })?;
                option.clone()
            } else if field.field_type == FieldType::StringInput && field.field_id.contains("email")
            {
                let anon = anonymize_email(&raw);
                replacements.push((raw.clone(), anon.clone()));
                anon
            } else {
                canonicalize_text(field.field_type, &raw)
            };
            gold.insert(field.field_id.clone(), value);
        }
        let mut body = BODY_KEYS
            .iter()
            .find_map(|k| record.get(*k).and_then(as_text))
            .unwrap_or_else(|| {
                schema
                    .scored_fields()
                    .map(|f| format!("{}\n", gold[&f.field_id]))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
        for (from, to) in &replacements {
            body = body.replace(from.as_str(), to);
        }
        out.push(GoldRecord {
            sample_id: record_id,
            form_id: schema.form_id.clone(),
            context_document: enforce_containment(schema, &gold, body),
            gold,
            provenance: Provenance::Ingested,
        });
    }
    Ok(out)
}

/// Parses a metadata file: one JSON object per non-blank line.
pub fn parse_metadata_jsonl(text: &str) -> Result<Vec<Value>, DatagenError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| DatagenError::Json {
                line: i + 1,
                source: e,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_catalog, find_form};
    use crate::datagen::context::missing_values;
    use serde_json::json;

    fn paper_form() -> FormSchema {
        find_form(&builtin_catalog(), "paper_submission")
            .unwrap()
            .clone()
    }

    fn record(i: usize) -> Value {
        json!({
            "id": format!("p{i}"),
            "title": format!("A Study of Things, Part {i}"),
            "authors": ["Ada Quist", "Bo Lindqvist"],
            "abstract": "We study   things.\nThey are interesting.",
            "keywords": ["things", "study"],
            "contact_email": "ada@uni.invalid",
            "subject_area": "machine learning",
            "body": "Full text. Contact ada@uni.invalid for details."
        })
    }

    #[test]
    fn maps_fields_and_anonymizes() {
        let schema = paper_form();
        let mut r = record(1);
        r["subject_area"] = json!(schema.field("subject_area").unwrap().options[0].to_lowercase());
        let out = ingest_metadata_records(&schema, &[r]).unwrap();
        let g = &out[0];
        assert_eq!(g.form_id, "paper_submission");
        assert_eq!(g.provenance, Provenance::Ingested);
        assert_eq!(g.gold["authors"], "Ada Quist, Bo Lindqvist");
        assert_eq!(g.gold["abstract"], "We study things. They are interesting.");
        assert!(g.gold["contact_email"].ends_with("@example.com"));
        assert!(!g.context_document.contains("uni.invalid"));
        assert!(g.context_document.starts_with("Full text."));
        assert!(missing_values(&schema, &g.gold, &g.context_document).is_empty());
    }

    #[test]
    fn missing_abstract_is_reported() {
        let schema = paper_form();
        let mut r = record(0);
        r["subject_area"] = json!(schema.field("subject_area").unwrap().options[0]);
        r.as_object_mut().unwrap().remove("abstract");
        let err = ingest_metadata_records(&schema, &[r]).unwrap_err();
        assert!(matches!(err, DatagenError::MissingField { ref field, .. } if field == "abstract"));
    }

    #[test]
    fn fifty_records_in_fifty_out() {
        let schema = paper_form();
        let option = schema.field("subject_area").unwrap().options[1].clone();
        let records: Vec<Value> = (0..50)
            .map(|i| {
                let mut r = record(i);
                r["subject_area"] = json!(option);
                r
            })
            .collect();
        let text: String = records.iter().map(|r| format!("{r}\n")).collect();
        let parsed = parse_metadata_jsonl(&text).unwrap();
        let out = ingest_metadata_records(&schema, &parsed).unwrap();
        assert_eq!(out.len(), 50);
        let ids: std::collections::BTreeSet<_> = out.iter().map(|g| &g.sample_id).collect();
        assert_eq!(ids.len(), 50);
    }

    #[test]
    fn unknown_option_rejected() {
        let schema = paper_form();
        let mut r = record(0);
        r["subject_area"] = json!("Alchemy");
        assert!(matches!(
            ingest_metadata_records(&schema, &[r]),
            Err(DatagenError::InvalidValue { .. })
        ));
    }
}
