//! Blocking HTTP clients for OpenAI-compatible chat-completion endpoints:
//! a multimodal model for the agent and a text generator for datagen.

use base64::Engine;
use formbench::agent::{with_retries, ModelClient, ModelError, Prompt};
use formbench::datagen::{GeneratorError, TextGenerator};
use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde_json::{json, Value};

use crate::config::{ConfigError, EndpointConfig};

#[derive(Debug, Clone)]
pub struct ChatEndpoint {
    http: Client,
    url: String,
    model: String,
    api_key: String,
    max_retries: u32,
}

impl ChatEndpoint {
    /// Resolves the credential from the environment variable the config
    /// names. An endpoint without a model name is a configuration error.
    pub fn from_config(config: &EndpointConfig) -> Result<ChatEndpoint, ConfigError> {
        if config.model.is_empty() {
            return Err(ConfigError::Invalid {
                key: "model".into(),
                value: String::new(),
                reason: "no model name configured".into(),
            });
        }
        let api_key = std::env::var(&config.api_key_env)
            .map_err(|_| ConfigError::MissingCredential(config.api_key_env.clone()))?;
        let http = Client::builder()
            .timeout(config.timeout())
            .build()
            .map_err(|e| ConfigError::Invalid {
                key: "base_url".into(),
                value: config.base_url.clone(),
                reason: e.to_string(),
            })?;
        Ok(ChatEndpoint {
            http,
            url: format!("{}/chat/completions", config.base_url.trim_end_matches('/')),
            model: config.model.clone(),
            api_key,
            max_retries: config.max_retries,
        })
    }

    pub fn max_retries(&self) -> u32 {
        self.max_retries
    }

    fn chat(&self, content: Value) -> Result<String, ModelError> {
        let body = json!({
            "model": self.model,
            "temperature": 0,
            "messages": [{ "role": "user", "content": content }],
        });
        let response = self
            .http
            .post(&self.url)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| ModelError::Transport(e.to_string()))?;
        let status = response.status();
        let text = response
            .text()
            .map_err(|e| ModelError::Transport(e.to_string()))?;
        if status.is_server_error() || status == StatusCode::TOO_MANY_REQUESTS {
            return Err(ModelError::Transport(format!("{status}: {text}")));
        }
        if !status.is_success() {
            return Err(ModelError::Rejected(format!("{status}: {text}")));
        }
        extract_reply(&text)
    }
}

/// The assistant message text of a chat-completion response body.
pub fn extract_reply(body: &str) -> Result<String, ModelError> {
    let v: Value = serde_json::from_str(body)
        .map_err(|e| ModelError::Rejected(format!("unreadable response: {e}")))?;
    let content = &v["choices"][0]["message"]["content"];
    match content {
        Value::String(s) => Ok(s.clone()),
        // Some servers answer with a list of typed parts.
        Value::Array(parts) => Ok(parts
            .iter()
            .filter_map(|p| p["text"].as_str())
            .collect::<Vec<_>>()
            .join("")),
        _ => Err(ModelError::Rejected(
            "response has no message content".into(),
        )),
    }
}

/// Message content carrying the prompt text and the screenshot as a PNG
/// data URL.
pub fn multimodal_content(prompt: &Prompt) -> Value {
    let png = base64::engine::general_purpose::STANDARD.encode(&prompt.image_png);
    json!([
        { "type": "text", "text": prompt.text },
        { "type": "image_url", "image_url": { "url": format!("data:image/png;base64,{png}") } },
    ])
}

pub struct HttpModelClient(pub ChatEndpoint);

impl ModelClient for HttpModelClient {
    fn model_name(&self) -> &str {
        &self.0.model
    }

    fn complete(&self, prompt: &Prompt) -> Result<String, ModelError> {
        self.0.chat(multimodal_content(prompt))
    }
}

pub struct HttpTextGenerator(pub ChatEndpoint);

impl TextGenerator for HttpTextGenerator {
    fn generate(&self, prompt: &str) -> Result<String, GeneratorError> {
        let (result, _) = with_retries(self.0.max_retries, || {
            self.0.chat(Value::String(prompt.to_string()))
        });
        result.map_err(|e| GeneratorError::Unavailable(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reply_shapes() {
        let body = r#"{"choices":[{"message":{"role":"assistant","content":"CLICK(1, 2)"}}]}"#;
        assert_eq!(extract_reply(body).unwrap(), "CLICK(1, 2)");
        let parts = r#"{"choices":[{"message":{"content":[{"type":"text","text":"A"},{"type":"text","text":"B"}]}}]}"#;
        assert_eq!(extract_reply(parts).unwrap(), "AB");
        assert!(matches!(extract_reply("{}"), Err(ModelError::Rejected(_))));
    }

    #[test]
    fn image_travels_as_data_url() {
        let prompt = Prompt {
            text: "fill".into(),
            image_png: vec![0x89, b'P', b'N', b'G'],
            screenshot_digest: String::new(),
        };
        let c = multimodal_content(&prompt);
        assert_eq!(c[0]["text"], "fill");
        assert_eq!(c[1]["image_url"]["url"], "data:image/png;base64,iVBORw==");
    }

    #[test]
    fn missing_credentials_are_config_errors() {
        let cfg = EndpointConfig {
            model: "m".into(),
            api_key_env: "FORMBENCH_TEST_SURELY_UNSET_KEY".into(),
            ..Default::default()
        };
        assert!(matches!(
            ChatEndpoint::from_config(&cfg),
            Err(ConfigError::MissingCredential(_))
        ));
        let unnamed = EndpointConfig::default();
        assert!(matches!(
            ChatEndpoint::from_config(&unnamed),
            Err(ConfigError::Invalid { .. })
        ));
    }
}
