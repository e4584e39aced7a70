//! Service and CLI configuration: one TOML file plus `FORMBENCH_*`
//! environment overrides. Credentials never live in the file; it only names
//! the environment variable that holds them.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid setting {key}={value:?}: {reason}")]
    Invalid {
        key: String,
        value: String,
        reason: String,
    },
    #[error("environment variable {0} holding the API credential is not set")]
    MissingCredential(String),
}

/// An HTTP text or multimodal model endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EndpointConfig {
    /// Base address of an OpenAI-compatible API, e.g. `https://host/v1`.
    pub base_url: String,
    pub model: String,
    /// Name of the environment variable holding the bearer token.
    pub api_key_env: String,
    pub timeout_secs: u64,
    pub max_retries: u32,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            base_url: "http://127.0.0.1:8000/v1".into(),
            model: String::new(),
            api_key_env: "FORMBENCH_API_KEY".into(),
            timeout_secs: 120,
            max_retries: 2,
        }
    }
}

impl EndpointConfig {
    pub fn timeout(&self) -> Duration {
        Duration::from_secs(self.timeout_secs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub listen: String,
    /// Directory of `.form` documents; the built-in catalog when unset.
    pub catalog_dir: Option<PathBuf>,
    /// Records file written by `generate-dataset`; generated in memory
    /// (templated, `dataset_seed`, `samples_per_form`) when unset.
    pub dataset_path: Option<PathBuf>,
    pub dataset_seed: u64,
    pub samples_per_form: usize,
    /// Theme ids sessions may use.
    pub themes: Vec<String>,
    /// Extra theme documents (`*.toml`) to load alongside the built-ins.
    pub theme_dir: Option<PathBuf>,
    pub step_cap: u32,
    pub idle_timeout_secs: u64,
    /// Where submitted episode logs are persisted.
    pub log_dir: PathBuf,
    /// Episodes evaluated concurrently by `run-eval`.
    pub max_in_flight: usize,
    pub model: EndpointConfig,
    pub generator: EndpointConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            listen: "127.0.0.1:8080".into(),
            catalog_dir: None,
            dataset_path: None,
            dataset_seed: 0,
            samples_per_form: 50,
            themes: vec!["plain".into(), "compact".into(), "dark".into()],
            theme_dir: None,
            step_cap: formbench::env::DEFAULT_STEP_CAP,
            idle_timeout_secs: 30 * 60,
            log_dir: PathBuf::from("episodes"),
            max_in_flight: 4,
            model: EndpointConfig::default(),
            generator: EndpointConfig::default(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Invalid {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    /// Reads `path` (defaults when `None`), then applies the process
    /// environment.
    pub fn load(path: Option<&Path>) -> Result<Config, ConfigError> {
        let mut config = match path {
            Some(p) => Config::from_toml(&std::fs::read_to_string(p).map_err(|source| {
                ConfigError::Read {
                    path: p.to_path_buf(),
                    source,
                }
            })?)?,
            None => Config::default(),
        };
        config.apply_env(|k| std::env::var(k).ok())?;
        config.validate()?;
        Ok(config)
    }

    /// Applies `FORMBENCH_*` overrides looked up through `var`.
    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(v) = var("FORMBENCH_LISTEN") {
            self.listen = v;
        }
        if let Some(v) = var("FORMBENCH_CATALOG_DIR") {
            self.catalog_dir = Some(v.into());
        }
        if let Some(v) = var("FORMBENCH_DATASET") {
            self.dataset_path = Some(v.into());
        }
        if let Some(v) = var("FORMBENCH_THEMES") {
            self.themes = v
                .split(',')
                .map(|t| t.trim().to_string())
                .filter(|t| !t.is_empty())
                .collect();
        }
        if let Some(v) = var("FORMBENCH_STEP_CAP") {
            self.step_cap = parse("FORMBENCH_STEP_CAP", &v)?;
        }
        if let Some(v) = var("FORMBENCH_IDLE_TIMEOUT_SECS") {
            self.idle_timeout_secs = parse("FORMBENCH_IDLE_TIMEOUT_SECS", &v)?;
        }
        if let Some(v) = var("FORMBENCH_LOG_DIR") {
            self.log_dir = v.into();
        }
        if let Some(v) = var("FORMBENCH_MAX_IN_FLIGHT") {
            self.max_in_flight = parse("FORMBENCH_MAX_IN_FLIGHT", &v)?;
        }
        for (prefix, endpoint) in [
            ("FORMBENCH_MODEL", &mut self.model),
            ("FORMBENCH_GENERATOR", &mut self.generator),
        ] {
            if let Some(v) = var(&format!("{prefix}_BASE_URL")) {
                endpoint.base_url = v;
            }
            if let Some(v) = var(&format!("{prefix}_NAME")) {
                endpoint.model = v;
            }
            if let Some(v) = var(&format!("{prefix}_API_KEY_ENV")) {
                endpoint.api_key_env = v;
            }
            if let Some(v) = var(&format!("{prefix}_TIMEOUT_SECS")) {
                endpoint.timeout_secs = parse(&format!("{prefix}_TIMEOUT_SECS"), &v)?;
            }
            if let Some(v) = var(&format!("{prefix}_MAX_RETRIES")) {
                endpoint.max_retries = parse(&format!("{prefix}_MAX_RETRIES"), &v)?;
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |key: &str, value: String, reason: &str| {
            Err(ConfigError::Invalid {
                key: key.into(),
                value,
                reason: reason.into(),
            })
        };
        if self.step_cap == 0 {
            return invalid("step_cap", "0".into(), "must be positive");
        }
        if self.themes.is_empty() {
            return invalid("themes", String::new(), "at least one theme is required");
        }
        if self.samples_per_form == 0 {
            return invalid("samples_per_form", "0".into(), "must be positive");
        }
        if self.max_in_flight == 0 {
            return invalid("max_in_flight", "0".into(), "must be positive");
        }
        Ok(())
    }

    pub fn idle_timeout(&self) -> Duration {
        Duration::from_secs(self.idle_timeout_secs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_environment() {
        let mut c = Config::from_toml(
            r#"
            listen = "0.0.0.0:9000"
            step_cap = 80
            [model]
            model = "vision-large"
            "#,
        )
        .unwrap();
        assert_eq!(c.step_cap, 80);
        assert_eq!(c.model.model, "vision-large");
        assert_eq!(c.idle_timeout(), Duration::from_secs(1800));
        let env = |k: &str| match k {
            "FORMBENCH_STEP_CAP" => Some("120".to_string()),
            "FORMBENCH_THEMES" => Some("plain, dark".to_string()),
            "FORMBENCH_MODEL_MAX_RETRIES" => Some("5".to_string()),
            _ => None,
        };
        c.apply_env(env).unwrap();
        assert_eq!(c.listen, "0.0.0.0:9000");
        assert_eq!(c.step_cap, 120);
        assert_eq!(c.themes, ["plain", "dark"]);
        assert_eq!(c.model.max_retries, 5);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(
            Config::from_toml("bogus = 1"),
            Err(ConfigError::Parse(_))
        ));
        let mut c = Config::default();
        let err = c.apply_env(|k| (k == "FORMBENCH_STEP_CAP").then(|| "many".to_string()));
        assert!(matches!(err, Err(ConfigError::Invalid { .. })));
        c.step_cap = 0;
        assert!(c.validate().is_err());
    }
}
