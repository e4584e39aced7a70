//! HTTP session service and batch tooling for the formbench environment.

pub mod batch;
pub mod clients;
pub mod config;
pub mod http;
pub mod resources;
pub mod service;

pub use config::{Config, ConfigError};
pub use resources::Resources;
pub use service::{Service, ServiceError, ServiceOptions};

impl ServiceOptions {
    pub fn from_config(config: &Config) -> ServiceOptions {
        ServiceOptions {
            step_cap: config.step_cap,
            idle_timeout: config.idle_timeout(),
            log_dir: Some(config.log_dir.clone()),
        }
    }
}
