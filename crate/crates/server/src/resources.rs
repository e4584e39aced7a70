//! The forms, samples and themes a service or batch run works with.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use formbench::datagen::{build_dataset, DatagenError, Dataset, GoldRecord};
use formbench::render::theme::ThemeError;
use formbench::render::{builtin_themes, Theme};
use formbench::schema::{load_catalog_dir, SchemaError};
use formbench::{builtin_catalog, FormSchema};
use thiserror::Error;

use crate::config::Config;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Dataset(#[from] DatagenError),
    #[error(transparent)]
    Theme(#[from] ThemeError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("sample `{sample_id}` refers to unknown form `{form_id}`")]
    OrphanSample { sample_id: String, form_id: String },
}

#[derive(Debug, Clone)]
pub struct Resources {
    pub forms: BTreeMap<String, Arc<FormSchema>>,
    pub samples: BTreeMap<String, Arc<GoldRecord>>,
    pub themes: BTreeMap<String, Theme>,
}

impl Resources {
    pub fn new(
        catalog: Vec<FormSchema>,
        records: Vec<GoldRecord>,
        themes: Vec<Theme>,
    ) -> Result<Resources, LoadError> {
        let forms: BTreeMap<_, _> = catalog
            .into_iter()
            .map(|f| (f.form_id.clone(), Arc::new(f)))
            .collect();
        let mut samples = BTreeMap::new();
        for r in records {
            if !forms.contains_key(&r.form_id) {
                return Err(LoadError::OrphanSample {
                    sample_id: r.sample_id,
                    form_id: r.form_id,
                });
            }
            samples.insert(r.sample_id.clone(), Arc::new(r));
        }
        Ok(Resources {
            forms,
            samples,
            themes: themes
                .into_iter()
                .map(|t| (t.theme_id.clone(), t))
                .collect(),
        })
    }

    /// Catalog, dataset and themes as `config` describes them. Only the
    /// themes listed in `config.themes` are kept.
    pub fn load(config: &Config) -> Result<Resources, LoadError> {
        let catalog = Resources::load_catalog(config)?;
        let records = match &config.dataset_path {
            Some(path) => Dataset::read(path)?.records,
            None => {
                build_dataset(&catalog, config.samples_per_form, config.dataset_seed, None)?.records
            }
        };
        let mut themes = builtin_themes();
        if let Some(dir) = &config.theme_dir {
            themes.extend(load_theme_dir(dir)?);
        }
        let mut selected = Vec::new();
        for id in &config.themes {
            let theme = themes
                .iter()
                .rev()
                .find(|t| &t.theme_id == id)
                .ok_or_else(|| ThemeError::Unknown(id.clone()))?;
            selected.push(theme.clone());
        }
        Resources::new(catalog, records, selected)
    }

    /// The configured form catalog alone.
    pub fn load_catalog(config: &Config) -> Result<Vec<FormSchema>, LoadError> {
        Ok(match &config.catalog_dir {
            Some(dir) => load_catalog_dir(dir)?,
            None => builtin_catalog(),
        })
    }

    pub fn form(&self, form_id: &str) -> Option<&Arc<FormSchema>> {
        self.forms.get(form_id)
    }

    pub fn sample(&self, sample_id: &str) -> Option<&Arc<GoldRecord>> {
        self.samples.get(sample_id)
    }

    pub fn samples_for<'a>(
        &'a self,
        form_id: &'a str,
    ) -> impl Iterator<Item = &'a Arc<GoldRecord>> + 'a {
        self.samples.values().filter(move |s| s.form_id == form_id)
    }
}

fn load_theme_dir(dir: &Path) -> Result<Vec<Theme>, LoadError> {
    let io = |source| LoadError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(|source| LoadError::Io {
                path: p.display().to_string(),
                source,
            })?;
            let theme = Theme::from_document(&text)?;
            theme.validate()?;
            Ok(theme)
        })
        .collect()
}
