//! Batch work behind the CLI: dataset generation, evaluation runs,
//! re-scoring and frame export.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use formbench::agent::{
    drive_episode, replay, rescore, AgentError, DriveOptions, EpisodeLog, EpisodeOutcome,
    ModelClient, ModelResponder, NoiseProfile, NoisyResponder, OracleResponder, PageResponder,
};
use formbench::datagen::{
    build_dataset, ingest_metadata_records, parse_metadata_jsonl, DatagenError, Dataset,
    TextGenerator,
};
use formbench::env::create_session;
use formbench::render::Viewport;
use formbench::scoring::{verdict_rows, EpisodeReport, Protocol, ValueMetric};
use formbench::{FieldType, FormSchema};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tracing::{info, warn};

use crate::resources::Resources;

#[derive(Debug, Error)]
pub enum BatchError {
    #[error(transparent)]
    Datagen(#[from] DatagenError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Csv(#[from] formbench::scoring::ScoringError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unknown {kind} `{id}`")]
    Unknown { kind: &'static str, id: String },
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> BatchError + '_ {
    move |source| BatchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Generates the dataset and writes it with its manifest. Ingested
/// metadata records, when given, replace generated samples of their form.
pub fn generate_dataset(
    catalog: &[FormSchema],
    per_form: usize,
    seed: u64,
    generator: Option<&dyn TextGenerator>,
    ingest: &[(String, PathBuf)],
    out: &Path,
) -> Result<Dataset, BatchError> {
    let mut dataset = build_dataset(catalog, per_form, seed, generator)?;
    for (form_id, path) in ingest {
        let schema = catalog
            .iter()
            .find(|f| &f.form_id == form_id)
            .ok_or_else(|| BatchError::Unknown {
                kind: "form",
                id: form_id.clone(),
            })?;
        let text = std::fs::read_to_string(path).map_err(io(path))?;
        let mut records = ingest_metadata_records(schema, &parse_metadata_jsonl(&text)?)?;
        records.truncate(per_form);
        info!(form = %form_id, count = records.len(), "ingested metadata records");
        dataset.substitute(records);
    }
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io(dir))?;
    }
    dataset.write(out)?;
    Ok(dataset)
}

/// Which agent answers the pages.
#[derive(Clone)]
pub enum AgentChoice {
    Model {
        client: Arc<dyn ModelClient>,
        max_retries: u32,
    },
    Oracle,
    Noisy {
        seed: u64,
    },
}

impl AgentChoice {
    fn responder(&self, episode: usize) -> Box<dyn PageResponder + '_> {
        match self {
            AgentChoice::Model {
                client,
                max_retries,
            } => Box::new(ModelResponder {
                client: client.as_ref(),
                max_retries: *max_retries,
            }),
            AgentChoice::Oracle => Box::new(OracleResponder),
            AgentChoice::Noisy { seed } => Box::new(NoisyResponder {
                profile: NoiseProfile::default(),
                rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(episode as u64)),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPlan {
    /// All forms when empty.
    pub forms: Vec<String>,
    /// First N samples of each form; all when `None`.
    pub samples_per_form: Option<usize>,
    pub themes: Vec<String>,
    pub viewport: Viewport,
    pub ruler_on: bool,
    pub seed: u64,
    pub step_cap: u32,
    pub max_in_flight: usize,
    pub log_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodeSpec {
    pub form_id: String,
    pub sample_id: String,
    pub theme_id: String,
}

impl EpisodeSpec {
    pub fn log_name(&self) -> String {
        format!(
            "{}__{}__{}.jsonl",
            self.form_id, self.sample_id, self.theme_id
        )
    }
}

/// One CSV row: a field verdict plus the episode it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub agent: String,
    pub form_id: String,
    pub sample_id: String,
    pub theme_id: String,
    pub ruler_on: bool,
    pub protocol: Protocol,
    pub field_id: String,
    pub field_type: FieldType,
    pub bucket: String,
    pub click_correct: Option<bool>,
    pub value_correct: bool,
    pub value_metric: ValueMetric,
    pub bleu_score: Option<f64>,
    pub aborted: bool,
}

pub fn eval_rows(
    agent: &str,
    theme_id: &str,
    ruler_on: bool,
    aborted: bool,
    report: &EpisodeReport,
) -> Vec<EvalRow> {
    verdict_rows(report)
        .into_iter()
        .map(|v| EvalRow {
            agent: agent.to_string(),
            form_id: v.form_id,
            sample_id: v.sample_id,
            theme_id: theme_id.to_string(),
            ruler_on,
            protocol: v.protocol,
            field_id: v.field_id,
            field_type: v.field_type,
            bucket: v.bucket,
            click_correct: v.click_correct,
            value_correct: v.value_correct,
            value_metric: v.value_metric,
            bleu_score: v.bleu_score,
            aborted,
        })
        .collect()
}

pub fn write_rows<W: std::io::Write>(out: W, rows: &[EvalRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Default)]
pub struct EvalSummary {
    pub episodes: usize,
    pub rows: Vec<EvalRow>,
    /// One message per episode that failed or aborted.
    pub failures: Vec<String>,
}

impl EvalSummary {
    pub fn value_accuracy(&self, protocol: Protocol) -> f64 {
        let rows: Vec<_> = self
            .rows
            .iter()
            .filter(|r| r.protocol == protocol)
            .collect();
        if rows.is_empty() {
            return 0.0;
        }
        rows.iter().filter(|r| r.value_correct).count() as f64 / rows.len() as f64
    }
}

pub fn plan_episodes(
    resources: &Resources,
    plan: &EvalPlan,
) -> Result<Vec<EpisodeSpec>, BatchError> {
    let forms: Vec<&str> = if plan.forms.is_empty() {
        resources.forms.keys().map(String::as_str).collect()
    } else {
        plan.forms.iter().map(String::as_str).collect()
    };
    for theme in &plan.themes {
        if !resources.themes.contains_key(theme) {
            return Err(BatchError::Unknown {
                kind: "theme",
                id: theme.clone(),
            });
        }
    }
    let mut specs = Vec::new();
    for form in forms {
        resources.form(form).ok_or_else(|| BatchError::Unknown {
            kind: "form",
            id: form.to_string(),
        })?;
        let samples = resources
            .samples_for(form)
            .take(plan.samples_per_form.unwrap_or(usize::MAX));
        for sample in samples {
            for theme in &plan.themes {
                specs.push(EpisodeSpec {
                    form_id: form.to_string(),
                    sample_id: sample.sample_id.clone(),
                    theme_id: theme.clone(),
                });
            }
        }
    }
    Ok(specs)
}

fn run_one(
    resources: &Resources,
    plan: &EvalPlan,
    agent: &AgentChoice,
    index: usize,
    spec: &EpisodeSpec,
) -> Result<EpisodeOutcome, AgentError> {
    let env = create_session(
        resources.forms[&spec.form_id].clone(),
        resources.samples[&spec.sample_id].clone(),
        resources.themes[&spec.theme_id].clone(),
        plan.viewport,
        plan.ruler_on,
        plan.seed,
    )?
    .with_step_cap(plan.step_cap);
    let mut responder = agent.responder(index);
    drive_episode(responder.as_mut(), env, DriveOptions::default())
}

/// Runs every planned episode, at most `max_in_flight` at a time. Episodes
/// whose model became unavailable are still scored and reported as
/// failures.
pub fn run_eval(
    resources: &Resources,
    plan: &EvalPlan,
    agent: &AgentChoice,
) -> Result<EvalSummary, BatchError> {
    let specs = plan_episodes(resources, plan)?;
    if let Some(dir) = &plan.log_dir {
        std::fs::create_dir_all(dir).map_err(io(dir))?;
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Vec<EvalRow>, Option<String>)>> = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..plan.max_in_flight.max(1).min(specs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = specs.get(i) else { break };
                let (outcome, failure) = match run_one(resources, plan, agent, i, spec) {
                    Ok(o) => (Some(o), None),
                    Err(AgentError::ModelUnavailable { message, outcome }) => (Some(*outcome), Some(message)),
                    Err(e) => (None, Some(e.to_string())),
                };
                let mut rows = Vec::new();
                if let Some(o) = &outcome {
                    rows = eval_rows(&o.log.header.agent, &spec.theme_id, plan.ruler_on, o.log.aborted.is_some(), &o.report);
                    if let Some(dir) = &plan.log_dir {
                        let path = dir.join(spec.log_name());
                        if let Err(e) = std::fs::write(&path, o.log.to_jsonl()) {
                            warn!(path = %path.display(), error = %e, "could not write episode log");
                        }
                    }
                }
                let failure = failure.map(|m| format!("{}/{}/{}: {m}", spec.form_id, spec.sample_id, spec.theme_id));
                if let Some(f) = &failure {
                    warn!("{f}");
                }
                results.lock().unwrap().push((i, rows, failure));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|r| r.0);
    let mut summary = EvalSummary {
        episodes: specs.len(),
        ..Default::default()
    };
    for (_, rows, failure) in results {
        summary.rows.extend(rows);
        summary.failures.extend(failure);
    }
    Ok(summary)
}

/// Re-scores a persisted log against the current resources.
pub fn score_log(resources: &Resources, log: &EpisodeLog) -> Result<EpisodeReport, BatchError> {
    let cfg = &log.header.session;
    let unknown = |kind, id: &str| BatchError::Unknown {
        kind,
        id: id.to_string(),
    };
    let schema = resources
        .form(&cfg.form_id)
        .ok_or_else(|| unknown("form", &cfg.form_id))?;
    let sample = resources
        .sample(&cfg.sample_id)
        .ok_or_else(|| unknown("sample", &cfg.sample_id))?;
    let theme = resources
        .themes
        .get(&cfg.theme_id)
        .ok_or_else(|| unknown("theme", &cfg.theme_id))?;
    Ok(rescore(log, schema, sample, theme)?)
}

pub fn read_log(path: &Path) -> Result<EpisodeLog, BatchError> {
    let text = std::fs::read_to_string(path).map_err(io(path))?;
    Ok(EpisodeLog::from_jsonl(&text)?)
}

/// Re-renders a log to `frame_0000.png` (initial screen) and one frame
/// after every step. Returns the frame count and any replay mismatches.
pub fn export_frames(
    resources: &Resources,
    log: &EpisodeLog,
    out_dir: &Path,
) -> Result<(usize, Vec<String>), BatchError> {
    let cfg = &log.header.session;
    let unknown = |kind, id: &str| BatchError::Unknown {
        kind,
        id: id.to_string(),
    };
    let schema = resources
        .form(&cfg.form_id)
        .ok_or_else(|| unknown("form", &cfg.form_id))?;
    let sample = resources
        .sample(&cfg.sample_id)
        .ok_or_else(|| unknown("sample", &cfg.sample_id))?;
    let theme = resources
        .themes
        .get(&cfg.theme_id)
        .ok_or_else(|| unknown("theme", &cfg.theme_id))?;
    let mismatches = replay(log, schema, sample, theme)?.mismatches;

    std::fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let mut env = create_session(
        schema.clone(),
        sample.clone(),
        theme.clone(),
        cfg.viewport,
        cfg.ruler_on,
        cfg.seed,
    )
    .map_err(AgentError::from)?
    .with_step_cap(log.header.step_cap);
    let write = |n: usize, env: &formbench::env::EnvState| {
        let path = out_dir.join(format!("frame_{n:04}.png"));
        std::fs::write(&path, env.observe().screenshot().to_png()).map_err(io(&path))
    };
    write(0, &env)?;
    let mut n = 0;
    for step in log.steps() {
        n += 1;
        // Rejected steps were logged too; they leave the screen unchanged.
        let _ = env.step(&step.action);
        write(n, &env)?;
    }
    Ok((n + 1, mismatches))
}
