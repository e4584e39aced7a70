//! The replayable record of an episode and its line-delimited file format.
//!
//! On disk a log is one JSON object per line: a `header` line, then for each
//! page (or batch of actions) a `page` line followed by one `step` line per
//! action, and a closing `end` line.

use serde::{Deserialize, Serialize};

use super::dsl::Diagnostic;
use super::AgentError;
use crate::datagen::GoldRecord;
use crate::env::{create_session, Action, EnvState, SessionConfig, StepEvent, Termination};
use crate::render::{LayoutTree, Theme};
use crate::schema::FormSchema;
use crate::scoring::{score_episode, EpisodeReport, EpisodeTrace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepLog {
    pub action: Action,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event: Option<StepEvent>,
    /// Set when the environment rejected the action (it then had no effect).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Issued by the driver, not by the agent.
    #[serde(default)]
    pub forced: bool,
    /// Digest of the observation after this step, when recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screenshot_digest: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageLog {
    pub page_index: usize,
    /// Observation the agent answered.
    pub screenshot_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_digest: Option<String>,
    pub raw_output: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
    pub model_attempts: u32,
    /// Parsed actions never executed because the page had already turned.
    #[serde(default)]
    pub dropped_actions: usize,
    #[serde(default)]
    pub forced_turn: bool,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub steps: Vec<StepLog>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogHeader {
    pub session: SessionConfig,
    pub step_cap: u32,
    pub agent: String,
    pub prompt_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodeLog {
    pub header: LogHeader,
    pub pages: Vec<PageLog>,
    /// Why the episode stopped early, if it did.
    pub aborted: Option<String>,
    pub termination: Option<Termination>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum LogLine {
    Header(LogHeader),
    Page(PageLog),
    Step(StepLog),
    End {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        aborted: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        termination: Option<Termination>,
    },
}

impl EpisodeLog {
    pub fn new(header: LogHeader) -> EpisodeLog {
        EpisodeLog {
            header,
            pages: Vec::new(),
            aborted: None,
            termination: None,
        }
    }

    pub fn steps(&self) -> impl Iterator<Item = &StepLog> {
        self.pages.iter().flat_map(|p| p.steps.iter())
    }

    /// Every action handed to the environment, in order.
    pub fn actions(&self) -> Vec<Action> {
        self.steps().map(|s| s.action.clone()).collect()
    }

    /// Agent output of every page, concatenated.
    pub fn raw_output(&self) -> String {
        self.pages
            .iter()
            .map(|p| p.raw_output.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn model_calls(&self) -> u32 {
        self.pages.iter().map(|p| p.model_attempts).sum()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut push = |line: &LogLine| {
            out.push_str(&serde_json::to_string(line).expect("log records serialize"));
            out.push('\n');
        };
        push(&LogLine::Header(self.header.clone()));
        for page in &self.pages {
            push(&LogLine::Page(page.clone()));
            for step in &page.steps {
                push(&LogLine::Step(step.clone()));
            }
        }
        push(&LogLine::End {
            aborted: self.aborted.clone(),
            termination: self.termination,
        });
        out
    }

    pub fn from_jsonl(text: &str) -> Result<EpisodeLog, AgentError> {
        let mut log: Option<EpisodeLog> = None;
        for (i, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let bad = |message: &str| AgentError::MalformedLog {
                line: i + 1,
                message: message.to_string(),
            };
            let record: LogLine = serde_json::from_str(line).map_err(|e| bad(&e.to_string()))?;
            match (record, log.as_mut()) {
                (LogLine::Header(h), None) => log = Some(EpisodeLog::new(h)),
                (LogLine::Header(_), Some(_)) => return Err(bad("second header")),
                (_, None) => return Err(bad("record before header")),
                (LogLine::Page(p), Some(l)) => l.pages.push(p),
                (LogLine::Step(s), Some(l)) => match l.pages.last_mut() {
                    Some(p) => p.steps.push(s),
                    None => return Err(bad("step before any page")),
                },
                (
                    LogLine::End {
                        aborted,
                        termination,
                    },
                    Some(l),
                ) => {
                    l.aborted = aborted;
                    l.termination = termination;
                }
            }
        }
        log.ok_or(AgentError::MalformedLog {
            line: 0,
            message: "empty log".into(),
        })
    }
}

/// The result of re-executing a log against a fresh session.
#[derive(Debug, Clone)]
pub struct Replay {
    pub env: EnvState,
    /// Actions the environment accepted, with the layout each was applied to.
    pub actions: Vec<Action>,
    pub layouts: Vec<LayoutTree>,
    pub events: Vec<StepEvent>,
    /// Human-readable differences from what the log recorded.
    pub mismatches: Vec<String>,
}

impl Replay {
    pub fn is_faithful(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recreates the logged session and re-applies every logged action,
/// checking events, errors and any recorded screenshot digests.
pub fn replay(
    log: &EpisodeLog,
    schema: &FormSchema,
    sample: &GoldRecord,
    theme: &Theme,
) -> Result<Replay, AgentError> {
    let cfg = &log.header.session;
    if cfg.form_id != schema.form_id
        || cfg.sample_id != sample.sample_id
        || cfg.theme_id != theme.theme_id
    {
        return Err(AgentError::ReplayConfig(format!(
            "log is for {}/{}/{}, got {}/{}/{}",
            cfg.form_id,
            cfg.sample_id,
            cfg.theme_id,
            schema.form_id,
            sample.sample_id,
            theme.theme_id
        )));
    }
    let mut env = create_session(
        schema.clone().into(),
        sample.clone().into(),
        theme.clone(),
        cfg.viewport,
        cfg.ruler_on,
        cfg.seed,
    )?
    .with_step_cap(log.header.step_cap);
    let mut out = Replay {
        env: env.clone(),
        actions: Vec::new(),
        layouts: Vec::new(),
        events: Vec::new(),
        mismatches: Vec::new(),
    };
    let mut n = 0;
    for page in &log.pages {
        if env.current_page() != page.page_index {
            out.mismatches.push(format!(
                "page record {} found session on page {}",
                page.page_index,
                env.current_page()
            ));
        }
        let shown = env.observe().screenshot_digest;
        if shown != page.screenshot_digest {
            out.mismatches.push(format!(
                "page {}: observation digest differs",
                page.page_index
            ));
        }
        for step in &page.steps {
            n += 1;
            let layout = env.layout();
            match env.step(&step.action) {
                Ok(event) => {
                    if step.event.as_ref() != Some(&event) {
                        out.mismatches.push(format!(
                            "step {n}: event {event:?}, logged {:?}",
                            step.event
                        ));
                    }
                    out.actions.push(step.action.clone());
                    out.layouts.push(layout);
                    out.events.push(event);
                }
                Err(e) => {
                    if step.error.as_deref() != Some(e.to_string().as_str()) {
                        out.mismatches
                            .push(format!("step {n}: error `{e}`, logged {:?}", step.error));
                    }
                }
            }
            if let Some(logged) = &step.screenshot_digest {
                if *logged != env.observe().screenshot_digest {
                    out.mismatches
                        .push(format!("step {n}: screenshot digest differs"));
                }
            }
        }
    }
    if log.termination == Some(Termination::Closed) {
        env.close();
    }
    if env.termination() != log.termination {
        out.mismatches.push(format!(
            "termination {:?}, logged {:?}",
            env.termination(),
            log.termination
        ));
    }
    out.env = env;
    Ok(out)
}

/// Scores a logged episode from scratch by replaying it.
pub fn rescore(
    log: &EpisodeLog,
    schema: &FormSchema,
    sample: &GoldRecord,
    theme: &Theme,
) -> Result<EpisodeReport, AgentError> {
    let r = replay(log, schema, sample, theme)?;
    let extracted = r.env.extract_form_values();
    let raw = log.raw_output();
    Ok(score_episode(
        schema,
        sample,
        EpisodeTrace {
            actions: &r.actions,
            layouts: &r.layouts,
            events: &r.events,
            raw_output: &raw,
            extracted: &extracted,
        },
    )?)
}
