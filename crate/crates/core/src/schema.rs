//! Declarative form schemas.
//!
//! A [`FormSchema`] lists the pages and fields of one form. Schemas are plain
//! data: they are loaded from human-editable `.form` documents (TOML), checked
//! by [`validate_schema`], and never mutated once a session is running.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// File extension used by schema documents in a catalog directory.
pub const FORM_FILE_EXTENSION: &str = "form";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldType {
    StringInput,
    Description,
    Dropdown,
    Date,
    BinaryChoice,
    MultipleChoice,
    CheckboxInput,
    NumericInput,
    FileUpload,
}

impl FieldType {
    pub const ALL: [FieldType; 9] = [
        FieldType::StringInput,
        FieldType::Description,
        FieldType::Dropdown,
        FieldType::Date,
        FieldType::BinaryChoice,
        FieldType::MultipleChoice,
        FieldType::CheckboxInput,
        FieldType::NumericInput,
        FieldType::FileUpload,
    ];

    /// Types whose value is one or more entries of `options`.
    pub fn has_options(self) -> bool {
        matches!(
            self,
            FieldType::Dropdown | FieldType::BinaryChoice | FieldType::MultipleChoice
        )
    }

    /// Types whose value can be produced by typing text.
    pub fn accepts_text(self) -> bool {
        matches!(
            self,
            FieldType::StringInput
                | FieldType::Description
                | FieldType::Date
                | FieldType::NumericInput
                | FieldType::FileUpload
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FieldType::StringInput => "string_input",
            FieldType::Description => "description",
            FieldType::Dropdown => "dropdown",
            FieldType::Date => "date",
            FieldType::BinaryChoice => "binary_choice",
            FieldType::MultipleChoice => "multiple_choice",
            FieldType::CheckboxInput => "checkbox_input",
            FieldType::NumericInput => "numeric_input",
            FieldType::FileUpload => "file_upload",
        }
    }
}

impl fmt::Display for FieldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainCategory {
    AcademicResearch,
    ProfessionalBusiness,
    ArtsCreative,
    TechnologySoftware,
    FinanceBanking,
    HealthcareMedical,
    LegalCompliance,
    ConstructionManufacturing,
}

impl DomainCategory {
    pub const ALL: [DomainCategory; 8] = [
        DomainCategory::AcademicResearch,
        DomainCategory::ProfessionalBusiness,
        DomainCategory::ArtsCreative,
        DomainCategory::TechnologySoftware,
        DomainCategory::FinanceBanking,
        DomainCategory::HealthcareMedical,
        DomainCategory::LegalCompliance,
        DomainCategory::ConstructionManufacturing,
    ];

    pub fn display_name(self) -> &'static str {
        match self {
            DomainCategory::AcademicResearch => "Academic & Research",
            DomainCategory::ProfessionalBusiness => "Professional & Business",
            DomainCategory::ArtsCreative => "Arts & Creative",
            DomainCategory::TechnologySoftware => "Technology & Software",
            DomainCategory::FinanceBanking => "Finance & Banking",
            DomainCategory::HealthcareMedical => "Healthcare & Medical",
            DomainCategory::LegalCompliance => "Legal & Compliance",
            DomainCategory::ConstructionManufacturing => "Construction & Manufacturing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericRange {
    pub min: f64,
    pub max: f64,
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub field_id: String,
    pub label: String,
    pub field_type: FieldType,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub options: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_range: Option<NumericRange>,
    #[serde(default)]
    pub required: bool,
    /// Unscored fields have no gold value and do not count as field-value pairs.
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub scored: bool,
    #[serde(default)]
    pub page_index: usize,
}

impl FieldSpec {
    pub fn new(
        field_id: impl Into<String>,
        label: impl Into<String>,
        field_type: FieldType,
    ) -> Self {
        FieldSpec {
            field_id: field_id.into(),
            label: label.into(),
            field_type,
            options: Vec::new(),
            numeric_range: None,
            required: false,
            scored: true,
            page_index: 0,
        }
    }

    pub fn with_options<I, S>(mut self, options: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.options = options.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_range(mut self, min: f64, max: f64) -> Self {
        self.numeric_range = Some(NumericRange { min, max });
        self
    }

    pub fn required(mut self) -> Self {
        self.required = true;
        self
    }

    pub fn unscored(mut self) -> Self {
        self.scored = false;
        self
    }

    pub fn option_index(&self, text: &str) -> Option<usize> {
        self.options.iter().position(|o| o == text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormSchema {
    pub form_id: String,
    pub name: String,
    pub domain_category: DomainCategory,
    pub page_count: usize,
    pub theme_id: String,
    pub fields: Vec<FieldSpec>,
}

impl FormSchema {
    pub fn field(&self, field_id: &str) -> Option<&FieldSpec> {
        self.fields.iter().find(|f| f.field_id == field_id)
    }

    pub fn field_position(&self, field_id: &str) -> Option<usize> {
        self.fields.iter().position(|f| f.field_id == field_id)
    }

    pub fn fields_on_page(&self, page_index: usize) -> impl Iterator<Item = &FieldSpec> {
        self.fields
            .iter()
            .filter(move |f| f.page_index == page_index)
    }

    pub fn scored_fields(&self) -> impl Iterator<Item = &FieldSpec> {
        self.fields.iter().filter(|f| f.scored)
    }

    pub fn is_multi_page(&self) -> bool {
        self.page_count > 1
    }

    /// Distinct field types present in the form.
    pub fn field_types(&self) -> BTreeSet<FieldType> {
        self.fields.iter().map(|f| f.field_type).collect()
    }

    pub fn to_document(&self) -> String {
        // Serializing plain data with string keys cannot fail.
        toml::to_string_pretty(self).expect("form schema serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IssueScope {
    Form,
    Field(String),
}

impl fmt::Display for IssueScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IssueScope::Form => f.write_str("form"),
            IssueScope::Field(id) => write!(f, "field `{id}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub scope: IssueScope,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }

    fn form(&mut self, message: impl Into<String>) {
        self.issues.push(Issue {
            scope: IssueScope::Form,
            message: message.into(),
        });
    }

    fn field(&mut self, id: &str, message: impl Into<String>) {
        self.issues.push(Issue {
            scope: IssueScope::Field(id.to_string()),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", issue.scope, issue.message)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed schema document: {0}")]
    MalformedDocument(String),
    #[error("schema invariant violated: {0}")]
    InvariantViolation(ValidationReport),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Checks every field- and form-level invariant, reporting each violation.
pub fn validate_schema(schema: &FormSchema) -> ValidationReport {
    let mut report = ValidationReport::default();

    if schema.form_id.trim().is_empty() {
        report.form("form_id is empty");
    }
    if schema.page_count == 0 {
        report.form("page_count must be positive");
    }
    if schema.fields.is_empty() {
        report.form("form has no fields");
    }

    let mut seen = HashSet::new();
    for field in &schema.fields {
        let id = field.field_id.as_str();
        if id.trim().is_empty() {
            report.field(id, "field_id is empty");
        }
        if !seen.insert(id) {
            report.field(id, "duplicate field_id");
        }

        let ty = field.field_type;
        if ty.has_options() {
            if field.options.is_empty() {
                report.field(id, format!("{ty} field has no options"));
            } else if ty == FieldType::BinaryChoice && field.options.len() != 2 {
                report.field(
                    id,
                    format!(
                        "binary_choice needs exactly 2 options, has {}",
                        field.options.len()
                    ),
                );
            }
            let distinct: HashSet<&str> = field.options.iter().map(String::as_str).collect();
            if distinct.len() != field.options.len() {
                report.field(id, "duplicate option text");
            }
            if field
                .options
                .iter()
                .any(|o| o.trim().is_empty() || o.contains(';'))
            {
                report.field(id, "option text must be non-empty and free of ';'");
            }
        } else if !field.options.is_empty() {
            report.field(id, format!("{ty} field must not list options"));
        }

        match (ty, field.numeric_range) {
            (FieldType::NumericInput, Some(range)) => {
                if !(range.min.is_finite() && range.max.is_finite()) || range.min > range.max {
                    report.field(id, "numeric_range requires finite min <= max");
                }
            }
            (FieldType::NumericInput, None) => {}
            (_, Some(_)) => report.field(id, format!("{ty} field must not carry numeric_range")),
            (_, None) => {}
        }

        if schema.page_count > 0 && field.page_index >= schema.page_count {
            report.field(
                id,
                format!(
                    "page_index {} outside form with {} page(s)",
                    field.page_index, schema.page_count
                ),
            );
        }
    }

    if schema.page_count > 1 {
        for page in 0..schema.page_count {
            if schema.fields_on_page(page).next().is_none() {
                report.form(format!("page {page} of a multi-page form has no fields"));
            }
        }
    }

    report
}

/// Parses a schema document and validates it.
pub fn load_form_schema(document: &str) -> Result<FormSchema, SchemaError> {
    let schema: FormSchema =
        toml::from_str(document).map_err(|e| SchemaError::MalformedDocument(e.to_string()))?;
    let report = validate_schema(&schema);
    if !report.ok() {
        return Err(SchemaError::InvariantViolation(report));
    }
    Ok(schema)
}

pub fn load_form_file(path: &Path) -> Result<FormSchema, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|source| SchemaError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_form_schema(&text)
}

/// Loads every `<form_id>.form` document in `dir`, sorted by file name.
pub fn load_catalog_dir(dir: &Path) -> Result<Vec<FormSchema>, SchemaError> {
    let io_err = |source| SchemaError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        if path.extension().and_then(|e| e.to_str()) == Some(FORM_FILE_EXTENSION) {
            paths.push(path);
        }
    }
    paths.sort();
    paths.iter().map(|p| load_form_file(p)).collect()
}

/// Writes `forms/<form_id>.form` style documents into `dir`.
pub fn write_catalog_dir(dir: &Path, catalog: &[FormSchema]) -> Result<(), SchemaError> {
    std::fs::create_dir_all(dir).map_err(|source| SchemaError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for schema in catalog {
        let path = dir.join(format!("{}.{FORM_FILE_EXTENSION}", schema.form_id));
        std::fs::write(&path, schema.to_document()).map_err(|source| SchemaError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(field: FieldSpec) -> FormSchema {
        FormSchema {
            form_id: "t".into(),
            name: "Test".into(),
            domain_category: DomainCategory::AcademicResearch,
            page_count: 1,
            theme_id: "plain".into(),
            fields: vec![field],
        }
    }

    #[test]
    fn valid_single_string_field() {
        let report = validate_schema(&single(FieldSpec::new(
            "name",
            "Name",
            FieldType::StringInput,
        )));
        assert!(report.ok());
        assert!(report.issues.is_empty());
    }

    #[test]
    fn dropdown_without_options_is_one_issue() {
        let report = validate_schema(&single(FieldSpec::new("d", "D", FieldType::Dropdown)));
        assert!(!report.ok());
        assert_eq!(report.issues.len(), 1);
    }

    #[test]
    fn binary_choice_needs_two_options() {
        let field =
            FieldSpec::new("b", "B", FieldType::BinaryChoice).with_options(["Yes", "No", "Maybe"]);
        assert_eq!(validate_schema(&single(field)).issues.len(), 1);
    }

    #[test]
    fn empty_second_page_is_one_issue() {
        let mut schema = single(FieldSpec::new("a", "A", FieldType::StringInput));
        schema
            .fields
            .push(FieldSpec::new("b", "B", FieldType::StringInput));
        schema.page_count = 2;
        let report = validate_schema(&schema);
        assert_eq!(report.issues.len(), 1, "{report}");
        assert_eq!(report.issues[0].scope, IssueScope::Form);
    }

    #[test]
    fn inverted_range_and_out_of_range_page() {
        let mut field = FieldSpec::new("n", "N", FieldType::NumericInput).with_range(10.0, 1.0);
        field.page_index = 3;
        let report = validate_schema(&single(field));
        assert_eq!(report.issues.len(), 2);
    }

    #[test]
    fn duplicate_field_ids_rejected_on_load() {
        let doc = r#"
form_id = "dup"
name = "Dup"
domain_category = "finance_banking"
page_count = 1
theme_id = "plain"

[[fields]]
field_id = "x"
label = "X"
field_type = "string_input"

[[fields]]
field_id = "x"
label = "X again"
field_type = "string_input"
"#;
        match load_form_schema(doc) {
            Err(SchemaError::InvariantViolation(report)) => assert_eq!(report.issues.len(), 1),
            other => panic!("expected invariant violation, got {other:?}"),
        }
    }

    #[test]
    fn zero_fields_rejected_on_load() {
        let doc = r#"
form_id = "empty"
name = "Empty"
domain_category = "finance_banking"
page_count = 1
theme_id = "plain"
fields = []
"#;
        assert!(matches!(
            load_form_schema(doc),
            Err(SchemaError::InvariantViolation(_))
        ));
    }

    #[test]
    fn syntax_error_is_malformed() {
        assert!(matches!(
            load_form_schema("form_id = [unterminated"),
            Err(SchemaError::MalformedDocument(_))
        ));
    }

    #[test]
    fn unknown_field_type_is_malformed() {
        let doc = r#"
form_id = "x"
name = "X"
domain_category = "finance_banking"
page_count = 1
theme_id = "plain"

[[fields]]
field_id = "a"
label = "A"
field_type = "slider"
"#;
        assert!(matches!(
            load_form_schema(doc),
            Err(SchemaError::MalformedDocument(_))
        ));
    }
}
