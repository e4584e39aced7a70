//! Click and value metrics, BLEU, and the per-episode report.

pub mod bleu;
pub mod clicks;
pub mod report;
pub mod value;

use std::collections::BTreeMap;

use thiserror::Error;

pub use bleu::bleu;
pub use clicks::{score_clicks, ClickScore, ClickVerdict};
pub use report::{
    aggregate_report, combine_verdicts, report_bucket, verdict_rows, write_csv, AtomicScore,
    EpisodeMeta, EpisodeReport, FieldVerdict, Protocol, ScoreReport, VerdictRow,
};
pub use value::{score_value_outputscan, score_value_statestrict, ValueMetric, ValueVerdict};

use crate::datagen::GoldRecord;
use crate::env::{Action, EventKind, StepEvent};
use crate::render::LayoutTree;
use crate::schema::FormSchema;

#[derive(Debug, Error)]
pub enum ScoringError {
    #[error("history has {actions} actions but {layouts} layouts")]
    MisalignedHistory { actions: usize, layouts: usize },
    #[error("verdict for unknown field `{0}`")]
    UnknownField(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Everything an episode left behind that scoring looks at.
#[derive(Debug, Clone, Copy)]
pub struct EpisodeTrace<'a> {
    pub actions: &'a [Action],
    /// Layout each action was applied to.
    pub layouts: &'a [LayoutTree],
    pub events: &'a [StepEvent],
    /// Everything the agent emitted, all pages concatenated.
    pub raw_output: &'a str,
    /// Field values at the end of the episode.
    pub extracted: &'a BTreeMap<String, String>,
}

/// Scores an episode under both protocols.
pub fn score_episode(
    schema: &FormSchema,
    sample: &GoldRecord,
    trace: EpisodeTrace<'_>,
) -> Result<EpisodeReport, ScoringError> {
    let clicks = score_clicks(schema, trace.actions, trace.layouts, &sample.gold)?;
    let meta = EpisodeMeta {
        actions: trace.events.len(),
        effective_actions: trace
            .events
            .iter()
            .filter(|e| e.kind != EventKind::NoEffect)
            .count(),
        unattributed_clicks: clicks.unattributed_clicks,
    };
    let strict = score_value_statestrict(schema, trace.extracted, &sample.gold);
    let scan = score_value_outputscan(schema, trace.raw_output, &sample.gold);
    Ok(EpisodeReport {
        form_id: schema.form_id.clone(),
        sample_id: sample.sample_id.clone(),
        state_strict: aggregate_report(
            schema,
            Protocol::StateStrict,
            combine_verdicts(schema, Protocol::StateStrict, &clicks, &strict),
            meta,
        )?,
        output_scan: aggregate_report(
            schema,
            Protocol::OutputScan,
            combine_verdicts(schema, Protocol::OutputScan, &clicks, &scan),
            meta,
        )?,
    })
}
