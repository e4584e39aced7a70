//! A deterministic form-filling benchmark: declarative forms rendered to
//! pixel screenshots, a widget simulator driven by `Click`/`Type` actions,
//! a gold dataset generator, and Click/Value scoring.

pub mod agent;
pub mod catalog;
pub mod datagen;
pub mod env;
pub mod render;
pub mod schema;
pub mod scoring;
pub mod values;

pub use catalog::builtin_catalog;
pub use schema::{FieldSpec, FieldType, FormSchema};
