//! Agents that drive sessions: the model-backed greedy page-wise driver, a
//! gold-knowing oracle, and scripted noisy and random agents.

pub mod client;
pub mod dsl;
pub mod episode;
pub mod log;
pub mod prompt;
pub mod scripted;

use thiserror::Error;

pub use client::{
    complete_with_retries, with_retries, FixtureClient, FixtureEntry, ModelClient, ModelError,
};
pub use dsl::{parse_actions, render_actions, ActionSequence, Diagnostic};
pub use episode::{
    drive_episode, run_episode, run_oracle_episode, DriveOptions, EpisodeOutcome, EpisodeRecorder,
    ModelResponder, NoisyResponder, OracleResponder, PageResponder, PageResponse,
};
pub use log::{replay, rescore, EpisodeLog, LogHeader, PageLog, Replay, StepLog};
pub use prompt::{build_prompt, Prompt, AGENT_PROMPT_VERSION};
pub use scripted::{background_point, noisy_agent, oracle_agent, random_clicks, NoiseProfile};

use crate::env::EnvError;
use crate::scoring::ScoringError;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("field `{field_id}` cannot be filled: {reason}")]
    UnfillableField { field_id: String, reason: String },
    /// The model could not be reached; the episode was scored with what had
    /// been executed and its log marked aborted.
    #[error("model unavailable: {message}")]
    ModelUnavailable {
        message: String,
        outcome: Box<EpisodeOutcome>,
    },
    /// A single failed model call; the driver turns it into `ModelUnavailable`.
    #[error("model call failed after {attempts} attempts: {source}")]
    Model { source: ModelError, attempts: u32 },
    #[error("episodes start from a fresh session")]
    SessionNotFresh,
    #[error("log line {line}: {message}")]
    MalformedLog { line: usize, message: String },
    #[error("cannot replay: {0}")]
    ReplayConfig(String),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
}
