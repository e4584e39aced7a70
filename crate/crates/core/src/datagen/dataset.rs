use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::context::{
    generate_context_document, missing_values, TextGenerator, CONTEXT_PROMPT_VERSION,
};
use super::sampler::{sample_gold_values, sample_stream};
use super::{DatagenError, GoldRecord, Provenance};
use crate::schema::FormSchema;
use crate::values::is_canonical;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub records: Vec<GoldRecord>,
    pub catalog_hash: String,
    pub seed: u64,
}

/// Sidecar written next to a dataset file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub catalog_hash: String,
    pub seed: u64,
    pub form_count: usize,
    pub record_count: usize,
    pub pair_count: usize,
    pub prompt_version: String,
}

/// Digest of the catalog's schema documents, in catalog order.
pub fn catalog_hash(catalog: &[FormSchema]) -> String {
    let mut hasher = Sha256::new();
    for schema in catalog {
        hasher.update(schema.to_document().as_bytes());
        hasher.update([0]);
    }
    hex::encode(hasher.finalize())
}

pub fn sample_id(form_id: &str, sample_index: usize) -> String {
    format!("{form_id}-{sample_index:04}")
}

/// Builds sample `sample_index` of `schema`. Depends only on its arguments,
/// so any sample can be regenerated alone.
pub fn build_sample(
    schema: &FormSchema,
    seed: u64,
    sample_index: usize,
    generator: Option<&dyn TextGenerator>,
) -> Result<GoldRecord, DatagenError> {
    let mut rng = sample_stream(seed, &schema.form_id, sample_index);
    let gold = sample_gold_values(schema, &mut rng);
    let context_document = generate_context_document(schema, &gold, generator, &mut rng)?;
    Ok(GoldRecord {
        sample_id: sample_id(&schema.form_id, sample_index),
        form_id: schema.form_id.clone(),
        context_document,
        gold,
        provenance: if generator.is_some() {
            Provenance::LlmGenerated
        } else {
            Provenance::Templated
        },
    })
}

/// Builds `per_form_count` samples for every form, forms in parallel.
pub fn build_dataset(
    catalog: &[FormSchema],
    per_form_count: usize,
    seed: u64,
    generator: Option<&dyn TextGenerator>,
) -> Result<Dataset, DatagenError> {
    if per_form_count == 0 {
        return Err(DatagenError::EmptyRequest);
    }
    let per_form: Vec<Result<Vec<GoldRecord>, DatagenError>> = thread::scope(|s| {
        let handles: Vec<_> = catalog
            .iter()
            .map(|schema| {
                s.spawn(move || {
                    (0..per_form_count)
                        .map(|i| build_sample(schema, seed, i, generator))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sample worker panicked"))
            .collect()
    });
    let mut records = Vec::with_capacity(catalog.len() * per_form_count);
    for batch in per_form {
        records.extend(batch?);
    }
    Ok(Dataset {
        records,
        catalog_hash: catalog_hash(catalog),
        seed,
    })
}

/// Problems with `record` against its schema; empty when it is well formed.
pub fn check_record(schema: &FormSchema, record: &GoldRecord) -> Vec<String> {
    let mut problems = Vec::new();
    if record.form_id != schema.form_id {
        problems.push(format!("record is for form `{}`", record.form_id));
    }
    let scored: BTreeSet<&str> = schema
        .scored_fields()
        .map(|f| f.field_id.as_str())
        .collect();
    for key in record.gold.keys() {
        if !scored.contains(key.as_str()) {
            problems.push(format!("gold key `{key}` is not a scored field"));
        }
    }
    for field in schema.scored_fields() {
        match record.gold.get(&field.field_id) {
            None => problems.push(format!("no gold value for `{}`", field.field_id)),
            Some(v) if !is_canonical(field, v) => problems.push(format!(
                "gold value {v:?} for `{}` is not canonical",
                field.field_id
            )),
            _ => {}
        }
    }
    for field in missing_values(schema, &record.gold, &record.context_document) {
        problems.push(format!(
            "context document lacks the value of `{}`",
            field.field_id
        ));
    }
    problems
}

impl Dataset {
    pub fn pair_count(&self) -> usize {
        self.records.iter().map(|r| r.gold.len()).sum()
    }

    pub fn form_ids(&self) -> BTreeSet<&str> {
        self.records.iter().map(|r| r.form_id.as_str()).collect()
    }

    pub fn record(&self, sample_id: &str) -> Option<&GoldRecord> {
        self.records.iter().find(|r| r.sample_id == sample_id)
    }

    pub fn samples_for<'a>(
        &'a self,
        form_id: &'a str,
    ) -> impl Iterator<Item = &'a GoldRecord> + 'a {
        self.records.iter().filter(move |r| r.form_id == form_id)
    }

    /// Replaces the first samples of a form with ingested records, keeping
    /// the per-form count unchanged.
    pub fn substitute(&mut self, ingested: Vec<GoldRecord>) {
        let mut incoming = ingested.into_iter();
        for slot in self.records.iter_mut() {
            let Some(form) = incoming.as_slice().first().map(|r| r.form_id.clone()) else {
                break;
            };
            if slot.form_id == form {
                *slot = incoming.next().unwrap();
            }
        }
    }

    pub fn manifest(&self) -> DatasetManifest {
        DatasetManifest {
            catalog_hash: self.catalog_hash.clone(),
            seed: self.seed,
            form_count: self.form_ids().len(),
            record_count: self.records.len(),
            pair_count: self.pair_count(),
            prompt_version: CONTEXT_PROMPT_VERSION.to_string(),
        }
    }

    /// One record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&serde_json::to_string(record).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn parse_records(text: &str) -> Result<Vec<GoldRecord>, DatagenError> {
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

    pub fn manifest_path(path: &Path) -> PathBuf {
        let mut name = path.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        path.with_file_name(name)
    }

    /// Writes the records file and its manifest sidecar.
    pub fn write(&self, path: &Path) -> Result<(), DatagenError> {
        fs::write(path, self.to_jsonl())?;
        let manifest = serde_json::to_string_pretty(&self.manifest()).expect("manifest serializes");
        fs::write(Self::manifest_path(path), manifest + "\n")?;
        Ok(())
    }

    /// Reads a records file; the manifest, when present, supplies the hash
    /// and seed.
    pub fn read(path: &Path) -> Result<Dataset, DatagenError> {
        let records = Self::parse_records(&fs::read_to_string(path)?)?;
        let (catalog_hash, seed) = match fs::read_to_string(Self::manifest_path(path)) {
            Ok(text) => {
                let m: DatasetManifest = serde_json::from_str(&text)
                    .map_err(|e| DatagenError::Json { line: 1, source: e })?;
                (m.catalog_hash, m.seed)
            }
            Err(_) => (String::new(), 0),
        };
        Ok(Dataset {
            records,
            catalog_hash,
            seed,
        })
    }
}
