//! Gold dataset construction: sampled field values, context documents that
//! contain them, ingested paper metadata, and the assembled corpus.

pub mod context;
pub mod dataset;
pub mod ingest;
pub mod record;
pub mod sampler;
pub mod words;

use thiserror::Error;

pub use context::{generate_context_document, GeneratorError, TextGenerator};
pub use dataset::{
    build_dataset, build_sample, catalog_hash, check_record, Dataset, DatasetManifest,
};
pub use ingest::{ingest_metadata_records, parse_metadata_jsonl};
pub use record::{GoldRecord, Provenance};
pub use sampler::{sample_gold_values, sample_stream};

#[derive(Debug, Error)]
pub enum DatagenError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("record `{record}` lacks scored field `{field}`")]
    MissingField { record: String, field: String },
    #[error("record `{record}` has invalid value {value:?} for `{field}`")]
    InvalidValue {
        record: String,
        field: String,
        value: String,
    },
    #[error("per_form_count must be at least 1")]
    EmptyRequest,
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
