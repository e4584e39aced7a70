//! Session management behind the wire API. Everything here is synchronous;
//! the HTTP layer runs it on the blocking pool.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use chrono::{DateTime, Utc};
use formbench::agent::{
    parse_actions, render_actions, replay, rescore, DriveOptions, EpisodeLog, EpisodeRecorder,
    PageResponse,
};
use formbench::datagen::Provenance;
use formbench::env::{create_session, Action, EnvError, SessionConfig, StepEvent, Termination};
use formbench::render::{LayoutError, Viewport};
use formbench::scoring::EpisodeReport;
use formbench::{FieldType, FormSchema};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tracing::{info, warn};

use crate::resources::Resources;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown form `{0}`")]
    UnknownForm(String),
    #[error("unknown sample `{0}`")]
    UnknownSample(String),
    #[error("sample `{sample_id}` belongs to form `{form_id}`")]
    SampleFormMismatch { sample_id: String, form_id: String },
    #[error("unknown theme `{0}`")]
    UnknownTheme(String),
    #[error("viewport too small: {0}")]
    ViewportTooSmall(String),
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("session `{0}` expired")]
    Expired(String),
    #[error("session `{0}` is terminated")]
    SessionTerminated(String),
    #[error("session `{0}` was already submitted")]
    AlreadySubmitted(String),
    #[error("session `{0}` has not been submitted")]
    NotSubmitted(String),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl ServiceError {
    /// Stable machine-readable name, used as the `error` field on the wire.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::UnknownForm(_) => "UnknownForm",
            ServiceError::UnknownSample(_) => "UnknownSample",
            ServiceError::SampleFormMismatch { .. } => "SampleFormMismatch",
            ServiceError::UnknownTheme(_) => "UnknownTheme",
            ServiceError::ViewportTooSmall(_) => "ViewportTooSmall",
            ServiceError::UnknownSession(_) => "UnknownSession",
            ServiceError::Expired(_) => "Expired",
            ServiceError::SessionTerminated(_) => "SessionTerminated",
            ServiceError::AlreadySubmitted(_) => "AlreadySubmitted",
            ServiceError::NotSubmitted(_) => "NotSubmitted",
            ServiceError::BadRequest(_) => "BadRequest",
            ServiceError::Internal(_) => "Internal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    Active,
    Submitted,
    Expired,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionHandle {
    pub session_id: String,
    pub created_at: DateTime<Utc>,
    pub config: SessionConfig,
    pub status: SessionStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CreateSession {
    pub form_id: String,
    pub sample_id: String,
    pub theme_id: Option<String>,
    pub viewport: Option<Viewport>,
    pub ruler_on: bool,
    pub seed: u64,
}

/// A batch of actions, either structured or as action-language text. Text
/// is kept verbatim as the agent's output for output-scan scoring.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PostActions {
    pub actions: Option<Vec<Action>>,
    pub text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedAction {
    pub index: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionsResult {
    pub events: Vec<StepEvent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected: Vec<RejectedAction>,
    /// Lines of `text` that did not parse.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<formbench::agent::Diagnostic>,
    /// Actions not applied because the session ended part-way.
    pub dropped: usize,
    pub screenshot_digest: String,
    pub page_index: usize,
    pub page_count: usize,
    pub step_count: u32,
    pub status: SessionStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub termination: Option<Termination>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormSummary {
    pub form_id: String,
    pub name: String,
    pub domain_category: String,
    pub page_count: usize,
    pub field_count: usize,
    pub field_types: Vec<FieldType>,
    pub sample_count: usize,
}

/// What a client may know about a sample before submitting: its context
/// document, never its gold values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub sample_id: String,
    pub provenance: Provenance,
    pub context_document: String,
}

#[derive(Debug)]
struct Session {
    handle: SessionHandle,
    last_active: Instant,
    /// Dropped once the session expires.
    recorder: Option<EpisodeRecorder>,
    report: Option<EpisodeReport>,
}

#[derive(Debug, Clone)]
pub struct ServiceOptions {
    pub step_cap: u32,
    pub idle_timeout: Duration,
    pub log_dir: Option<PathBuf>,
}

pub struct Service {
    resources: Resources,
    options: ServiceOptions,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
}

fn new_session_id() -> String {
    hex::encode(rand::random::<[u8; 16]>())
}

fn is_session_id(id: &str) -> bool {
    id.len() == 32 && id.bytes().all(|b| b.is_ascii_hexdigit())
}

impl Service {
    pub fn new(resources: Resources, options: ServiceOptions) -> Service {
        Service {
            resources,
            options,
            sessions: RwLock::new(HashMap::new()),
        }
    }

    pub fn resources(&self) -> &Resources {
        &self.resources
    }

    pub fn forms(&self) -> Vec<FormSummary> {
        self.resources
            .forms
            .values()
            .map(|f| FormSummary {
                form_id: f.form_id.clone(),
                name: f.name.clone(),
                domain_category: f.domain_category.display_name().to_string(),
                page_count: f.page_count,
                field_count: f.fields.len(),
                field_types: f.field_types().into_iter().collect(),
                sample_count: self.resources.samples_for(&f.form_id).count(),
            })
            .collect()
    }

    pub fn samples(&self, form_id: &str) -> Result<Vec<SampleSummary>, ServiceError> {
        self.resources
            .form(form_id)
            .ok_or_else(|| ServiceError::UnknownForm(form_id.to_string()))?;
        Ok(self
            .resources
            .samples_for(form_id)
            .map(|s| SampleSummary {
                sample_id: s.sample_id.clone(),
                provenance: s.provenance,
                context_document: s.context_document.clone(),
            })
            .collect())
    }

    pub fn create_session(&self, request: CreateSession) -> Result<SessionHandle, ServiceError> {
        let schema = self
            .resources
            .form(&request.form_id)
            .ok_or_else(|| ServiceError::UnknownForm(request.form_id.clone()))?
            .clone();
        let sample = self
            .resources
            .sample(&request.sample_id)
            .ok_or_else(|| ServiceError::UnknownSample(request.sample_id.clone()))?
            .clone();
        if sample.form_id != schema.form_id {
            return Err(ServiceError::SampleFormMismatch {
                sample_id: sample.sample_id.clone(),
                form_id: schema.form_id.clone(),
            });
        }
        let theme_id = request
            .theme_id
            .clone()
            .unwrap_or_else(|| default_theme(&schema, &self.resources));
        let theme = self
            .resources
            .themes
            .get(&theme_id)
            .ok_or_else(|| ServiceError::UnknownTheme(theme_id.clone()))?
            .clone();
        let viewport = request.viewport.unwrap_or(Viewport::DEFAULT);
        let env = create_session(
            schema,
            sample,
            theme,
            viewport,
            request.ruler_on,
            request.seed,
        )
        .map_err(|e| match e {
            EnvError::Layout(
                e @ (LayoutError::ViewportTooSmall { .. }
                | LayoutError::ViewportBelowMinimum { .. }),
            ) => ServiceError::ViewportTooSmall(e.to_string()),
            other => ServiceError::Internal(other.to_string()),
        })?
        .with_step_cap(self.options.step_cap);
        let handle = SessionHandle {
            session_id: new_session_id(),
            created_at: Utc::now(),
            config: env.config(),
            status: SessionStatus::Active,
        };
        let recorder = EpisodeRecorder::new(env, "session", "none", DriveOptions::default());
        self.sweep();
        self.sessions.write().unwrap().insert(
            handle.session_id.clone(),
            Arc::new(Mutex::new(Session {
                handle: handle.clone(),
                last_active: Instant::now(),
                recorder: Some(recorder),
                report: None,
            })),
        );
        info!(session = %handle.session_id, form = %handle.config.form_id, "session created");
        Ok(handle)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownSession(id.to_string()))
    }

    /// Marks the session expired if it has idled too long; expired sessions
    /// reject everything.
    fn touch(&self, s: &mut Session) -> Result<(), ServiceError> {
        self.expire_if_idle(s);
        if s.handle.status == SessionStatus::Expired {
            return Err(ServiceError::Expired(s.handle.session_id.clone()));
        }
        s.last_active = Instant::now();
        Ok(())
    }

    /// Expires idle sessions, releasing their environments.
    pub fn sweep(&self) {
        let sessions: Vec<_> = self.sessions.read().unwrap().values().cloned().collect();
        for s in sessions {
            if let Ok(mut s) = s.try_lock() {
                self.expire_if_idle(&mut s);
            }
        }
    }

    fn expire_if_idle(&self, s: &mut Session) {
        if s.handle.status == SessionStatus::Active
            && s.last_active.elapsed() > self.options.idle_timeout
        {
            s.handle.status = SessionStatus::Expired;
            s.recorder = None;
        }
    }

    pub fn handle(&self, id: &str) -> Result<SessionHandle, ServiceError> {
        let s = self.session(id)?;
        let mut s = s.lock().unwrap();
        self.expire_if_idle(&mut s);
        Ok(s.handle.clone())
    }

    /// PNG of the current observation.
    pub fn screenshot(&self, id: &str) -> Result<Vec<u8>, ServiceError> {
        let s = self.session(id)?;
        let mut s = s.lock().unwrap();
        self.touch(&mut s)?;
        let rec = s
            .recorder
            .as_ref()
            .expect("live sessions keep their recorder");
        Ok(rec.env().observe().screenshot().to_png())
    }

    pub fn post_actions(
        &self,
        id: &str,
        request: PostActions,
    ) -> Result<ActionsResult, ServiceError> {
        let (actions, raw_output, diagnostics) = match (request.actions, request.text) {
            (Some(_), Some(_)) => {
                return Err(ServiceError::BadRequest(
                    "give either `actions` or `text`, not both".into(),
                ))
            }
            (Some(actions), None) => {
                let raw = render_actions(&actions);
                (actions, raw, Vec::new())
            }
            (None, Some(text)) => {
                let parsed = parse_actions(&text);
                (parsed.actions, text, parsed.diagnostics)
            }
            (None, None) => (Vec::new(), String::new(), Vec::new()),
        };
        let s = self.session(id)?;
        let mut s = s.lock().unwrap();
        self.touch(&mut s)?;
        if s.handle.status == SessionStatus::Submitted {
            return Err(ServiceError::SessionTerminated(id.to_string()));
        }
        let rec = s
            .recorder
            .as_mut()
            .expect("live sessions keep their recorder");
        if rec.env().submitted() {
            return Err(ServiceError::SessionTerminated(id.to_string()));
        }
        let mut events = Vec::new();
        let mut rejected = Vec::new();
        let mut dropped = 0;
        if !actions.is_empty() || !raw_output.trim().is_empty() {
            let shown = rec.env().observe().screenshot_digest;
            rec.open_page(
                shown,
                PageResponse {
                    raw_output,
                    prompt_digest: None,
                    attempts: 0,
                },
                diagnostics.clone(),
            );
            let total = actions.len();
            for (index, action) in actions.into_iter().enumerate() {
                if rec.env().submitted() {
                    dropped = total - index;
                    break;
                }
                match rec.execute(action, false) {
                    Ok(event) => events.push(event),
                    Err(e) => rejected.push(RejectedAction {
                        index,
                        error: e.to_string(),
                    }),
                }
            }
        }
        let env = rec.env();
        let observation = env.observe();
        let termination = env.termination();
        let page_count = env.page_count();
        let step_count = env.step_count();
        if termination.is_some() {
            self.finalize(&mut s)?;
        }
        Ok(ActionsResult {
            events,
            rejected,
            diagnostics,
            dropped,
            screenshot_digest: observation.screenshot_digest,
            page_index: observation.page_index,
            page_count,
            step_count,
            status: s.handle.status,
            termination,
        })
    }

    /// Scores the episode, persists its log and marks the session submitted.
    fn finalize(&self, s: &mut Session) -> Result<EpisodeReport, ServiceError> {
        let rec = s
            .recorder
            .as_mut()
            .expect("live sessions keep their recorder");
        rec.close();
        let report = rec
            .score()
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        if let Some(dir) = &self.options.log_dir {
            let path = log_path(dir, &s.handle.session_id);
            let written = std::fs::create_dir_all(dir)
                .and_then(|_| std::fs::write(&path, rec.log().to_jsonl()));
            if let Err(e) = written {
                warn!(path = %path.display(), error = %e, "could not persist episode log");
            }
        }
        s.handle.status = SessionStatus::Submitted;
        s.report = Some(report.clone());
        info!(session = %s.handle.session_id, value = report.state_strict.episodic_value, "session submitted");
        Ok(report)
    }

    pub fn submit(&self, id: &str) -> Result<EpisodeReport, ServiceError> {
        let s = self.session(id)?;
        let mut s = s.lock().unwrap();
        self.touch(&mut s)?;
        if s.handle.status == SessionStatus::Submitted {
            return Err(ServiceError::AlreadySubmitted(id.to_string()));
        }
        self.finalize(&mut s)
    }

    /// The report of a submitted session. Sessions from before a restart are
    /// re-scored from their persisted logs.
    pub fn report(&self, id: &str) -> Result<EpisodeReport, ServiceError> {
        match self.session(id) {
            Ok(s) => {
                let s = s.lock().unwrap();
                s.report.clone().ok_or_else(|| match s.handle.status {
                    SessionStatus::Expired => ServiceError::Expired(id.to_string()),
                    _ => ServiceError::NotSubmitted(id.to_string()),
                })
            }
            Err(e) => {
                let log = self.persisted_log(id).ok_or(e)?;
                let (schema, sample, theme) = self.log_resources(&log)?;
                rescore(&log, &schema, &sample, &theme)
                    .map_err(|e| ServiceError::Internal(e.to_string()))
            }
        }
    }

    /// The episode log so far (live sessions) or as persisted.
    pub fn episode_log(&self, id: &str) -> Result<EpisodeLog, ServiceError> {
        match self.session(id) {
            Ok(s) => {
                let s = s.lock().unwrap();
                match (&s.recorder, s.handle.status) {
                    (Some(rec), _) => Ok(rec.log().clone()),
                    _ => Err(ServiceError::Expired(id.to_string())),
                }
            }
            Err(e) => self.persisted_log(id).ok_or(e),
        }
    }

    /// PNG of the screen after the first `step` logged actions (0 = the
    /// initial screen), re-rendered from the log.
    pub fn replay_frame(&self, id: &str, step: usize) -> Result<Vec<u8>, ServiceError> {
        let mut log = self.episode_log(id)?;
        let total = log.steps().count();
        if step > total {
            return Err(ServiceError::BadRequest(format!(
                "step {step} beyond the {total} logged steps"
            )));
        }
        let mut remaining = step;
        for page in &mut log.pages {
            let keep = remaining.min(page.steps.len());
            page.steps.truncate(keep);
            remaining -= keep;
        }
        log.termination = None;
        let (schema, sample, theme) = self.log_resources(&log)?;
        let r = replay(&log, &schema, &sample, &theme)
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        Ok(r.env.observe().screenshot().to_png())
    }

    fn persisted_log(&self, id: &str) -> Option<EpisodeLog> {
        if !is_session_id(id) {
            return None;
        }
        let dir = self.options.log_dir.as_ref()?;
        let text = std::fs::read_to_string(log_path(dir, id)).ok()?;
        EpisodeLog::from_jsonl(&text).ok()
    }

    fn log_resources(
        &self,
        log: &EpisodeLog,
    ) -> Result<
        (
            FormSchema,
            formbench::datagen::GoldRecord,
            formbench::render::Theme,
        ),
        ServiceError,
    > {
        let cfg = &log.header.session;
        let schema = self
            .resources
            .form(&cfg.form_id)
            .ok_or_else(|| ServiceError::UnknownForm(cfg.form_id.clone()))?;
        let sample = self
            .resources
            .sample(&cfg.sample_id)
            .ok_or_else(|| ServiceError::UnknownSample(cfg.sample_id.clone()))?;
        let theme = self
            .resources
            .themes
            .get(&cfg.theme_id)
            .ok_or_else(|| ServiceError::UnknownTheme(cfg.theme_id.clone()))?;
        Ok(((**schema).clone(), (**sample).clone(), theme.clone()))
    }
}

fn default_theme(schema: &FormSchema, resources: &Resources) -> String {
    if resources.themes.contains_key(&schema.theme_id) {
        schema.theme_id.clone()
    } else {
        resources.themes.keys().next().cloned().unwrap_or_default()
    }
}

pub fn log_path(dir: &Path, session_id: &str) -> PathBuf {
    dir.join(format!("{session_id}.jsonl"))
}
