#![allow(dead_code)]

use std::path::Path;
use std::time::Duration;

use formbench::agent::oracle_agent;
use formbench::builtin_catalog;
use formbench::datagen::build_dataset;
use formbench::env::{create_session, Action};
use formbench::render::{builtin_themes, Viewport};
use formbench_server::{Resources, Service, ServiceOptions};

pub fn resources() -> Resources {
    let catalog = builtin_catalog();
    let dataset = build_dataset(&catalog, 2, 5, None).unwrap();
    Resources::new(catalog, dataset.records, builtin_themes()).unwrap()
}

pub fn service(log_dir: Option<&Path>, idle: Duration) -> Service {
    Service::new(
        resources(),
        ServiceOptions {
            step_cap: 500,
            idle_timeout: idle,
            log_dir: log_dir.map(Path::to_path_buf),
        },
    )
}

/// Pages of oracle actions for `sample_id`, planned on a private session
/// with the same configuration the service will use.
pub fn oracle_pages(resources: &Resources, sample_id: &str, theme_id: &str) -> Vec<Vec<Action>> {
    let sample = resources.samples[sample_id].clone();
    let schema = resources.forms[&sample.form_id].clone();
    let theme = resources.themes[theme_id].clone();
    let mut env = create_session(schema, sample, theme, Viewport::DEFAULT, false, 0).unwrap();
    let mut pages = Vec::new();
    while !env.submitted() {
        let actions = oracle_agent(&env).unwrap().actions;
        for a in &actions {
            env.step(a).unwrap();
        }
        pages.push(actions);
    }
    pages
}
