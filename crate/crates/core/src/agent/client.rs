use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::prompt::Prompt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// Network failure, timeout or server-side error; worth retrying.
    #[error("transport error: {0}")]
    Transport(String),
    /// The service refused the request; retrying will not help.
    #[error("request rejected: {0}")]
    Rejected(String),
    #[error("no recorded response for prompt {0}")]
    MissingFixture(String),
}

impl ModelError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, ModelError::Transport(_))
    }
}

/// A multimodal model: one text prompt and one image in, text out.
pub trait ModelClient: Send + Sync {
    fn model_name(&self) -> &str;
    fn complete(&self, prompt: &Prompt) -> Result<String, ModelError>;
}

/// Runs `call`, retrying transport failures up to `max_retries` times.
/// Returns the result and the number of calls made.
pub fn with_retries<T>(
    max_retries: u32,
    mut call: impl FnMut() -> Result<T, ModelError>,
) -> (Result<T, ModelError>, u32) {
    let mut attempts = 0;
    loop {
        attempts += 1;
        match call() {
            Err(e) if e.is_retryable() && attempts <= max_retries => continue,
            other => return (other, attempts),
        }
    }
}

pub fn complete_with_retries(
    client: &dyn ModelClient,
    prompt: &Prompt,
    max_retries: u32,
) -> (Result<String, ModelError>, u32) {
    with_retries(max_retries, || client.complete(prompt))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub prompt_digest: String,
    pub response: String,
}

/// Replays recorded responses keyed by prompt digest; for offline runs.
#[derive(Debug, Default)]
pub struct FixtureClient {
    name: String,
    responses: HashMap<String, String>,
    calls: Mutex<u32>,
}

impl FixtureClient {
    pub fn new(name: impl Into<String>) -> FixtureClient {
        FixtureClient {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn insert(&mut self, prompt_digest: impl Into<String>, response: impl Into<String>) {
        self.responses.insert(prompt_digest.into(), response.into());
    }

    pub fn from_entries(
        name: impl Into<String>,
        entries: impl IntoIterator<Item = FixtureEntry>,
    ) -> FixtureClient {
        let mut c = FixtureClient::new(name);
        for e in entries {
            c.insert(e.prompt_digest, e.response);
        }
        c
    }

    pub fn from_jsonl(
        name: impl Into<String>,
        text: &str,
    ) -> Result<FixtureClient, serde_json::Error> {
        let entries = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str::<FixtureEntry>)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FixtureClient::from_entries(name, entries))
    }

    pub fn to_jsonl(&self) -> String {
        let mut entries: Vec<_> = self.responses.iter().collect();
        entries.sort();
        entries
            .into_iter()
            .map(|(d, r)| {
                let e = FixtureEntry {
                    prompt_digest: d.clone(),
                    response: r.clone(),
                };
                serde_json::to_string(&e).expect("fixtures serialize") + "\n"
            })
            .collect()
    }

    pub fn calls(&self) -> u32 {
        *self.calls.lock().unwrap()
    }
}

impl ModelClient for FixtureClient {
    fn model_name(&self) -> &str {
        &self.name
    }

    fn complete(&self, prompt: &Prompt) -> Result<String, ModelError> {
        *self.calls.lock().unwrap() += 1;
        let digest = prompt.digest();
        self.responses
            .get(&digest)
            .cloned()
            .ok_or(ModelError::MissingFixture(digest))
    }
}
