use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::clicks::ClickScore;
use super::value::{ValueMetric, ValueVerdict};
use super::ScoringError;
use crate::schema::{FieldType, FormSchema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    OutputScan,
    StateStrict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldVerdict {
    pub field_id: String,
    pub field_type: FieldType,
    pub click_correct: Option<bool>,
    pub value_correct: bool,
    pub value_metric: ValueMetric,
    pub bleu_score: Option<f64>,
    pub protocol: Protocol,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomicScore {
    pub fields: usize,
    pub click_acc: f64,
    pub value_acc: f64,
}

/// Episode-level counts that are not per-field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EpisodeMeta {
    pub actions: usize,
    /// Actions whose event was not `NoEffect`.
    pub effective_actions: usize,
    pub unattributed_clicks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub protocol: Protocol,
    pub per_field: Vec<FieldVerdict>,
    pub atomic: BTreeMap<FieldType, AtomicScore>,
    /// The atomic scores regrouped into the reporting columns.
    pub buckets: BTreeMap<String, AtomicScore>,
    pub episodic_click: f64,
    pub episodic_value: f64,
    pub strict_completion: bool,
    pub action_match_rate: f64,
    pub overall: f64,
    pub unattributed_clicks: usize,
}

/// Reporting column for a field type. Numeric and file fields are pooled
/// with strings (they are still listed separately in `atomic`).
pub fn report_bucket(field_type: FieldType) -> &'static str {
    match field_type {
        FieldType::StringInput | FieldType::NumericInput | FieldType::FileUpload => "String",
        FieldType::Dropdown => "Drop-down List",
        FieldType::BinaryChoice => "Radio Button",
        FieldType::MultipleChoice => "Checkbox",
        FieldType::CheckboxInput => "Check",
        FieldType::Description => "Description",
        FieldType::Date => "Date",
    }
}

/// Joins click and value verdicts field by field.
pub fn combine_verdicts(
    schema: &FormSchema,
    protocol: Protocol,
    clicks: &ClickScore,
    values: &[ValueVerdict],
) -> Vec<FieldVerdict> {
    values
        .iter()
        .map(|v| FieldVerdict {
            field_id: v.field_id.clone(),
            field_type: schema
                .field(&v.field_id)
                .map_or(FieldType::StringInput, |f| f.field_type),
            click_correct: clicks.get(&v.field_id).and_then(|c| c.click_correct),
            value_correct: v.value_correct,
            value_metric: v.value_metric,
            bleu_score: v.bleu_score,
            protocol,
        })
        .collect()
}

/// Click correctness for averaging: a field nobody clicked counts as wrong.
fn clicked(v: &FieldVerdict) -> bool {
    v.click_correct == Some(true)
}

fn mean(hits: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        hits as f64 / n as f64
    }
}

fn summarize<'a>(verdicts: impl Iterator<Item = &'a FieldVerdict>) -> AtomicScore {
    let (mut n, mut c, mut v) = (0, 0, 0);
    for verdict in verdicts {
        n += 1;
        c += clicked(verdict) as usize;
        v += verdict.value_correct as usize;
    }
    AtomicScore {
        fields: n,
        click_acc: mean(c, n),
        value_acc: mean(v, n),
    }
}

pub fn aggregate_report(
    schema: &FormSchema,
    protocol: Protocol,
    per_field: Vec<FieldVerdict>,
    meta: EpisodeMeta,
) -> Result<ScoreReport, ScoringError> {
    for v in &per_field {
        match schema.field(&v.field_id) {
            Some(f) if f.field_type == v.field_type => {}
            _ => return Err(ScoringError::UnknownField(v.field_id.clone())),
        }
    }
    let mut report = ScoreReport {
        protocol,
        per_field,
        atomic: BTreeMap::new(),
        buckets: BTreeMap::new(),
        episodic_click: 0.0,
        episodic_value: 0.0,
        strict_completion: false,
        action_match_rate: mean(meta.effective_actions, meta.actions),
        overall: 0.0,
        unattributed_clicks: meta.unattributed_clicks,
    };
    report.fill_aggregates();
    Ok(report)
}

impl ScoreReport {
    fn fill_aggregates(&mut self) {
        let types: Vec<FieldType> = FieldType::ALL
            .into_iter()
            .filter(|t| self.per_field.iter().any(|v| v.field_type == *t))
            .collect();
        self.atomic = types
            .iter()
            .map(|t| {
                (
                    *t,
                    summarize(self.per_field.iter().filter(|v| v.field_type == *t)),
                )
            })
            .collect();
        let mut bucket_names: Vec<&str> = types.iter().map(|t| report_bucket(*t)).collect();
        bucket_names.dedup();
        self.buckets = bucket_names
            .into_iter()
            .map(|b| {
                let s = summarize(
                    self.per_field
                        .iter()
                        .filter(|v| report_bucket(v.field_type) == b),
                );
                (b.to_string(), s)
            })
            .collect();
        let all = summarize(self.per_field.iter());
        self.episodic_click = all.click_acc;
        self.episodic_value = all.value_acc;
        self.strict_completion =
            !self.per_field.is_empty() && self.per_field.iter().all(|v| v.value_correct);
        self.overall = self.episodic_value;
    }

    /// True when every aggregate equals its recomputation from `per_field`.
    pub fn is_consistent(&self) -> bool {
        let mut again = self.clone();
        again.fill_aggregates();
        again == *self
    }

    pub fn to_document(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Both protocols' reports for one episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeReport {
    pub form_id: String,
    pub sample_id: String,
    pub state_strict: ScoreReport,
    pub output_scan: ScoreReport,
}

impl EpisodeReport {
    pub fn to_document(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// One row of the flat verdict export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub form_id: String,
    pub sample_id: String,
    pub protocol: Protocol,
    pub field_id: String,
    pub field_type: FieldType,
    pub bucket: String,
    pub click_correct: Option<bool>,
    pub value_correct: bool,
    pub value_metric: ValueMetric,
    pub bleu_score: Option<f64>,
}

pub fn verdict_rows(report: &EpisodeReport) -> Vec<VerdictRow> {
    [&report.state_strict, &report.output_scan]
        .into_iter()
        .flat_map(|r| r.per_field.iter())
        .map(|v| VerdictRow {
            form_id: report.form_id.clone(),
            sample_id: report.sample_id.clone(),
            protocol: v.protocol,
            field_id: v.field_id.clone(),
            field_type: v.field_type,
            bucket: report_bucket(v.field_type).to_string(),
            click_correct: v.click_correct,
            value_correct: v.value_correct,
            value_metric: v.value_metric,
            bleu_score: v.bleu_score,
        })
        .collect()
}

/// Writes rows as CSV with a header line.
pub fn write_csv<W: Write>(out: W, rows: &[VerdictRow]) -> Result<(), ScoringError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
