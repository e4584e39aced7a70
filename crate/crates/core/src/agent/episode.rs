//! The greedy page-wise episode loop: one answer per page, executed in full,
//! then the page is turned.

use std::time::Instant;

use rand::Rng;

use super::client::{complete_with_retries, ModelClient};
use super::dsl::{parse_actions, render_actions, Diagnostic};
use super::log::{EpisodeLog, LogHeader, PageLog, StepLog};
use super::prompt::{build_prompt, AGENT_PROMPT_VERSION};
use super::scripted::{background_point, noisy_agent, oracle_agent, NoiseProfile};
use super::AgentError;
use crate::env::{Action, EnvError, EnvState, Observation, StepEvent};
use crate::render::LayoutTree;
use crate::scoring::{score_episode, EpisodeReport, EpisodeTrace, ScoringError};

/// What an agent said about one page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageResponse {
    pub raw_output: String,
    pub prompt_digest: Option<String>,
    pub attempts: u32,
}

/// Anything that answers a page observation with action-language text.
pub trait PageResponder {
    fn name(&self) -> String;
    fn prompt_version(&self) -> &str {
        "none"
    }
    fn respond(
        &mut self,
        env: &EnvState,
        observation: &Observation,
    ) -> Result<PageResponse, AgentError>;
}

/// Prompts a model with the context document and the page screenshot.
pub struct ModelResponder<'a> {
    pub client: &'a dyn ModelClient,
    pub max_retries: u32,
}

impl PageResponder for ModelResponder<'_> {
    fn name(&self) -> String {
        self.client.model_name().to_string()
    }

    fn prompt_version(&self) -> &str {
        AGENT_PROMPT_VERSION
    }

    fn respond(
        &mut self,
        env: &EnvState,
        observation: &Observation,
    ) -> Result<PageResponse, AgentError> {
        let prompt = build_prompt(&env.sample().context_document, observation, env.ruler_on());
        let (result, attempts) = complete_with_retries(self.client, &prompt, self.max_retries);
        match result {
            Ok(raw_output) => Ok(PageResponse {
                raw_output,
                prompt_digest: Some(prompt.digest()),
                attempts,
            }),
            Err(source) => Err(AgentError::Model { source, attempts }),
        }
    }
}

/// The gold-knowing oracle, answering in the action language.
pub struct OracleResponder;

impl PageResponder for OracleResponder {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn respond(&mut self, env: &EnvState, _: &Observation) -> Result<PageResponse, AgentError> {
        Ok(PageResponse {
            raw_output: render_actions(&oracle_agent(env)?.actions),
            prompt_digest: None,
            attempts: 0,
        })
    }
}

pub struct NoisyResponder<R> {
    pub profile: NoiseProfile,
    pub rng: R,
}

impl<R: Rng> PageResponder for NoisyResponder<R> {
    fn name(&self) -> String {
        "noisy".into()
    }

    fn respond(&mut self, env: &EnvState, _: &Observation) -> Result<PageResponse, AgentError> {
        let (_, raw_output) = noisy_agent(env, &self.profile, &mut self.rng)?;
        Ok(PageResponse {
            raw_output,
            prompt_digest: None,
            attempts: 0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DriveOptions {
    /// Record the screenshot digest after every step (one extra render each).
    pub record_step_digests: bool,
}

impl Default for DriveOptions {
    fn default() -> Self {
        DriveOptions {
            record_step_digests: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EpisodeOutcome {
    pub log: EpisodeLog,
    pub report: EpisodeReport,
    /// The session as the episode left it.
    pub env: EnvState,
}

/// Executes actions against a session while keeping everything needed to
/// log, replay and score the episode.
#[derive(Debug, Clone)]
pub struct EpisodeRecorder {
    env: EnvState,
    options: DriveOptions,
    log: EpisodeLog,
    actions: Vec<Action>,
    layouts: Vec<LayoutTree>,
    events: Vec<StepEvent>,
}

impl EpisodeRecorder {
    pub fn new(
        env: EnvState,
        agent: impl Into<String>,
        prompt_version: impl Into<String>,
        options: DriveOptions,
    ) -> Self {
        let log = EpisodeLog::new(LogHeader {
            session: env.config(),
            step_cap: env.step_cap(),
            agent: agent.into(),
            prompt_version: prompt_version.into(),
        });
        EpisodeRecorder {
            env,
            options,
            log,
            actions: Vec::new(),
            layouts: Vec::new(),
            events: Vec::new(),
        }
    }

    pub fn env(&self) -> &EnvState {
        &self.env
    }

    pub fn log(&self) -> &EpisodeLog {
        &self.log
    }

    /// Starts a log entry for the current page; `observation_digest` is the
    /// screenshot the agent answered.
    pub fn open_page(
        &mut self,
        observation_digest: String,
        response: PageResponse,
        diagnostics: Vec<Diagnostic>,
    ) {
        self.log.pages.push(PageLog {
            page_index: self.env.current_page(),
            screenshot_digest: observation_digest,
            prompt_digest: response.prompt_digest,
            raw_output: response.raw_output,
            diagnostics,
            model_attempts: response.attempts,
            dropped_actions: 0,
            forced_turn: false,
            elapsed_ms: 0,
            steps: Vec::new(),
        });
    }

    fn page_mut(&mut self) -> &mut PageLog {
        self.log.pages.last_mut().expect("a page is open")
    }

    /// Applies one action and logs it under the open page.
    pub fn execute(&mut self, action: Action, forced: bool) -> Result<StepEvent, EnvError> {
        let layout = self.env.layout();
        let result = self.env.step(&action);
        let mut step = StepLog {
            action: action.clone(),
            event: None,
            error: None,
            forced,
            screenshot_digest: None,
        };
        match &result {
            Ok(event) => {
                self.actions.push(action);
                self.layouts.push(layout);
                self.events.push(event.clone());
                step.event = Some(event.clone());
            }
            Err(e) => step.error = Some(e.to_string()),
        }
        if self.options.record_step_digests {
            step.screenshot_digest = Some(self.env.observe().screenshot_digest);
        }
        self.page_mut().steps.push(step);
        result
    }

    /// Ends the session from outside if it is still live.
    pub fn close(&mut self) {
        self.env.close();
        self.log.termination = self.env.termination();
    }

    pub fn abort(&mut self, reason: impl Into<String>) {
        self.log.aborted = Some(reason.into());
    }

    /// Scores what has happened so far under both protocols.
    pub fn score(&self) -> Result<EpisodeReport, ScoringError> {
        let extracted = self.env.extract_form_values();
        let raw = self.log.raw_output();
        score_episode(
            self.env.schema(),
            self.env.sample(),
            EpisodeTrace {
                actions: &self.actions,
                layouts: &self.layouts,
                events: &self.events,
                raw_output: &raw,
                extracted: &extracted,
            },
        )
    }

    pub fn finish(mut self) -> Result<EpisodeOutcome, ScoringError> {
        self.log.termination = self.env.termination();
        let report = self.score()?;
        Ok(EpisodeOutcome {
            log: self.log,
            report,
            env: self.env,
        })
    }
}

/// Runs a fresh session to completion with `responder` answering each page.
///
/// The driver turns the page itself (closing any open overlay first) when the
/// agent's actions leave it on the same page. Actions after an agent-issued
/// page turn are not executed; they were meant for the previous page.
pub fn drive_episode(
    responder: &mut dyn PageResponder,
    env: EnvState,
    options: DriveOptions,
) -> Result<EpisodeOutcome, AgentError> {
    if env.step_count() != 0 || env.submitted() {
        return Err(AgentError::SessionNotFresh);
    }
    let mut rec = EpisodeRecorder::new(env, responder.name(), responder.prompt_version(), options);
    let mut unavailable = None;

    while !rec.env.submitted() {
        let page = rec.env.current_page();
        let observation = rec.env.observe();
        let started = Instant::now();
        let response = match responder.respond(&rec.env, &observation) {
            Ok(r) => r,
            Err(AgentError::Model { source, attempts }) => {
                let message = format!("{source} (after {attempts} attempts)");
                rec.open_page(
                    observation.screenshot_digest,
                    PageResponse {
                        raw_output: String::new(),
                        prompt_digest: None,
                        attempts,
                    },
                    Vec::new(),
                );
                rec.page_mut().elapsed_ms = started.elapsed().as_millis() as u64;
                rec.abort(message.clone());
                unavailable = Some(message);
                break;
            }
            Err(e) => return Err(e),
        };
        let parsed = parse_actions(&response.raw_output);
        rec.open_page(observation.screenshot_digest, response, parsed.diagnostics);
        let total = parsed.actions.len();
        for (i, action) in parsed.actions.into_iter().enumerate() {
            if rec.env.submitted() || rec.env.current_page() != page {
                rec.page_mut().dropped_actions = total - i;
                break;
            }
            // Rejected actions are logged and skipped; the episode goes on.
            let _ = rec.execute(action, false);
        }
        if !rec.env.submitted() && rec.env.current_page() == page {
            rec.page_mut().forced_turn = true;
            if rec.env.overlay().is_some() {
                if let Some(p) = background_point(&rec.env.layout()) {
                    let _ = rec.execute(Action::click_at(p), true);
                }
            }
            if !rec.env.submitted() {
                let nav = rec.env.layout().navigation().bounds.center();
                let _ = rec.execute(Action::click_at(nav), true);
            }
        }
        rec.page_mut().elapsed_ms = started.elapsed().as_millis() as u64;
        if !rec.env.submitted() && rec.env.current_page() == page {
            rec.abort(format!("page {page} could not be turned"));
            break;
        }
    }

    let outcome = rec.finish()?;
    match unavailable {
        Some(message) => Err(AgentError::ModelUnavailable {
            message,
            outcome: Box::new(outcome),
        }),
        None => Ok(outcome),
    }
}

/// One model call per page (plus transport retries).
pub fn run_episode(
    client: &dyn ModelClient,
    env: EnvState,
    max_retries: u32,
    options: DriveOptions,
) -> Result<EpisodeOutcome, AgentError> {
    drive_episode(
        &mut ModelResponder {
            client,
            max_retries,
        },
        env,
        options,
    )
}

pub fn run_oracle_episode(
    env: EnvState,
    options: DriveOptions,
) -> Result<EpisodeOutcome, AgentError> {
    drive_episode(&mut OracleResponder, env, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::client::{FixtureClient, ModelError};
    use crate::agent::log::{replay, rescore};
    use crate::agent::prompt::Prompt;
    use crate::catalog::builtin_catalog;
    use crate::datagen::build_sample;
    use crate::env::create_session;
    use crate::render::{Theme, Viewport};
    use crate::schema::FormSchema;
    use std::sync::{Arc, Mutex};

    fn session(pred: impl Fn(&FormSchema) -> bool, ruler: bool) -> EnvState {
        let schema = builtin_catalog().into_iter().find(|s| pred(s)).unwrap();
        let sample = build_sample(&schema, 11, 1, None).unwrap();
        create_session(
            Arc::new(schema),
            Arc::new(sample),
            Theme::plain(),
            Viewport::DEFAULT,
            ruler,
            0,
        )
        .unwrap()
    }

    /// Records the oracle's answer to every prompt the driver will send.
    fn oracle_fixture(env: &EnvState) -> FixtureClient {
        let mut client = FixtureClient::new("fixture");
        let mut e = env.clone();
        while !e.submitted() {
            let obs = e.observe();
            let prompt = build_prompt(&e.sample().context_document, &obs, e.ruler_on());
            let seq = oracle_agent(&e).unwrap();
            client.insert(prompt.digest(), render_actions(&seq.actions));
            for a in &seq.actions {
                e.step(a).unwrap();
            }
        }
        client
    }

    #[test]
    fn perfect_transcript_scores_full_marks() {
        let env = session(|s| s.page_count == 2, true);
        let client = oracle_fixture(&env);
        let out = run_episode(&client, env, 0, DriveOptions::default()).unwrap();
        assert_eq!(client.calls(), 2);
        assert_eq!(out.log.pages.len(), 2);
        assert!(out.log.pages.iter().all(|p| !p.forced_turn));
        assert_eq!(out.report.state_strict.episodic_value, 1.0);
        assert_eq!(out.report.state_strict.episodic_click, 1.0);
        assert!(out.report.state_strict.strict_completion);
    }

    struct Silent(Mutex<u32>);

    impl ModelClient for Silent {
        fn model_name(&self) -> &str {
            "silent"
        }
        fn complete(&self, _: &Prompt) -> Result<String, ModelError> {
            *self.0.lock().unwrap() += 1;
            Ok("I cannot help with that.".into())
        }
    }

    #[test]
    fn empty_answers_still_terminate() {
        let env = session(|s| s.page_count == 3, false);
        let client = Silent(Mutex::new(0));
        let out = run_episode(&client, env, 2, DriveOptions::default()).unwrap();
        assert_eq!(*client.0.lock().unwrap(), 3);
        assert!(out
            .log
            .pages
            .iter()
            .all(|p| p.forced_turn && p.diagnostics.len() == 1));
        assert_eq!(out.report.state_strict.episodic_value, 0.0);
        assert!(out.env.submitted());
    }

    #[test]
    fn unavailable_model_aborts_with_partial_score() {
        let env = session(|s| s.page_count == 2, false);
        let client = FixtureClient::new("empty");
        match run_episode(&client, env, 3, DriveOptions::default()) {
            Err(AgentError::ModelUnavailable { outcome, .. }) => {
                assert!(outcome.log.aborted.is_some());
                assert_eq!(outcome.log.pages[0].model_attempts, 1);
                assert_eq!(outcome.report.state_strict.episodic_value, 0.0);
                assert!(!outcome.env.submitted());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn log_round_trips_and_replays() {
        let env = session(|s| s.page_count >= 2, true);
        let schema = env.schema().clone();
        let sample = env.sample().clone();
        let theme = env.theme().clone();
        let mut noisy = NoisyResponder {
            profile: NoiseProfile::default(),
            rng: <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9),
        };
        let out = drive_episode(&mut noisy, env, DriveOptions::default()).unwrap();
        let text = out.log.to_jsonl();
        let back = EpisodeLog::from_jsonl(&text).unwrap();
        assert_eq!(back, out.log);
        let r = replay(&back, &schema, &sample, &theme).unwrap();
        assert!(r.is_faithful(), "{:?}", r.mismatches);
        assert_eq!(
            rescore(&back, &schema, &sample, &theme).unwrap(),
            out.report
        );
    }

    #[test]
    fn oracle_episode_submits_itself() {
        let out = run_oracle_episode(
            session(|s| s.page_count == 1, false),
            DriveOptions::default(),
        )
        .unwrap();
        assert!(out.report.state_strict.strict_completion);
        assert!(out
            .log
            .pages
            .iter()
            .all(|p| !p.forced_turn && p.dropped_actions == 0));
    }
}
