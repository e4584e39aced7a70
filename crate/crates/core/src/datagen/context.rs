//! Context documents: the user-side text an agent reads the values from.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::sampler::sentences;
use super::words::{DEPARTMENTS, JOB_TITLES, ORG_STEMS, ORG_SUFFIXES};
use crate::schema::{FieldSpec, FieldType, FormSchema};

/// Prompt sent to an external generator. Results cite [`prompt_hash`].
pub const CONTEXT_PROMPT_TEMPLATE: &str = include_str!("../../assets/context_prompt_v1.txt");
pub const CONTEXT_PROMPT_VERSION: &str = "context_prompt_v1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("text generator unavailable: {0}")]
    Unavailable(String),
}

/// A single request/response text generation backend.
pub trait TextGenerator: Send + Sync {
    fn generate(&self, prompt: &str) -> Result<String, GeneratorError>;
}

pub fn prompt_hash() -> String {
    hex::encode(Sha256::digest(CONTEXT_PROMPT_TEMPLATE.as_bytes()))
}

/// Lower-cases a label for use mid-sentence, keeping acronyms such as "ID".
fn in_sentence(label: &str) -> String {
    label
        .split(' ')
        .map(|w| {
            if w.len() > 1 && w.chars().all(|c| !c.is_lowercase()) {
                w.to_string()
            } else {
                w.to_lowercase()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn context_prompt(schema: &FormSchema, gold: &BTreeMap<String, String>) -> String {
    let facts = schema
        .scored_fields()
        .filter_map(|f| {
            gold.get(&f.field_id)
                .map(|v| format!("- {}: {}", f.label, v))
        })
        .collect::<Vec<_>>()
        .join("\n");
    CONTEXT_PROMPT_TEMPLATE
        .replace("{form_name}", &schema.name)
        .replace("{facts}", &facts)
}

fn value_sentence<R: Rng + ?Sized>(field: &FieldSpec, value: &str, rng: &mut R) -> String {
    let label = &field.label;
    let l = in_sentence(label);
    let variant = rng.gen_range(0..3);
    match field.field_type {
        FieldType::StringInput | FieldType::NumericInput => match variant {
            0 => format!("My {l} is {value}."),
            1 => format!("{label}: {value}."),
            _ => format!("For the {l}, use {value}."),
        },
        FieldType::Description => match variant {
            0 => format!("{label}: {value}"),
            1 => format!("About the {l}: {value}"),
            _ => format!("Here is what I would write for the {l}. {value}"),
        },
        FieldType::Date => match variant {
            0 => format!("The {l} is {value}."),
            1 => format!("{label}: {value}."),
            _ => format!("Please put {value} as the {l}."),
        },
        FieldType::Dropdown | FieldType::BinaryChoice => match variant {
            0 => format!("For {l}, my answer is {value}."),
            1 => format!("{label}: {value}."),
            _ => format!("I would pick {value} for the {l}."),
        },
        FieldType::MultipleChoice => format!("{label} (every one that applies): {value}."),
        FieldType::CheckboxInput => format!("The box \"{label}\" should be {value}."),
        FieldType::FileUpload => match variant {
            0 => format!("The {l} is saved at {value}."),
            _ => format!("{label} file: {value}."),
        },
    }
}

/// Sentence appended for a value the document failed to mention verbatim.
pub fn containment_sentence(field: &FieldSpec, value: &str) -> String {
    format!("Also, the {} is {}.", in_sentence(&field.label), value)
}

/// Scored fields whose gold value does not occur verbatim in `document`.
pub fn missing_values<'a>(
    schema: &'a FormSchema,
    gold: &BTreeMap<String, String>,
    document: &str,
) -> Vec<&'a FieldSpec> {
    schema
        .scored_fields()
        .filter(|f| {
            gold.get(&f.field_id)
                .is_some_and(|v| !document.contains(v.as_str()))
        })
        .collect()
}

/// Appends a sentence for every gold value missing from `document`.
pub fn enforce_containment(
    schema: &FormSchema,
    gold: &BTreeMap<String, String>,
    document: String,
) -> String {
    let missing = missing_values(schema, gold, &document);
    if missing.is_empty() {
        return document;
    }
    let mut out = document.trim_end().to_string();
    out.push_str("\n\n");
    let extra: Vec<String> = missing
        .iter()
        .map(|f| containment_sentence(f, &gold[&f.field_id]))
        .collect();
    out.push_str(&extra.join(" "));
    out.push('\n');
    out
}

fn is_resume_form(schema: &FormSchema) -> bool {
    schema.form_id.contains("job_application")
}

fn templated_note<R: Rng + ?Sized>(
    schema: &FormSchema,
    gold: &BTreeMap<String, String>,
    rng: &mut R,
) -> String {
    let openings = [
        format!("Notes for the {}.", schema.name),
        format!("Here is everything needed for the {}.", schema.name),
        format!("Please use the following details for the {}.", schema.name),
    ];
    let mut out = openings.choose(rng).unwrap().clone();
    out.push_str("\n\n");
    let mut fields: Vec<&FieldSpec> = schema.scored_fields().collect();
    fields.shuffle(rng);
    let mut paragraph = Vec::new();
    for field in fields {
        let Some(value) = gold.get(&field.field_id) else {
            continue;
        };
        paragraph.push(value_sentence(field, value, rng));
        if paragraph.len() >= rng.gen_range(3..=5) {
            out.push_str(&paragraph.join(" "));
            out.push_str("\n\n");
            paragraph.clear();
        }
    }
    if !paragraph.is_empty() {
        out.push_str(&paragraph.join(" "));
        out.push('\n');
    }
    out
}

/// A sectioned Markdown resume for job application forms.
fn templated_resume<R: Rng + ?Sized>(
    schema: &FormSchema,
    gold: &BTreeMap<String, String>,
    rng: &mut R,
) -> String {
    let name = ["full_name", "applicant_name"]
        .iter()
        .find_map(|k| gold.get(*k))
        .cloned()
        .unwrap_or_else(|| "Applicant".to_string());
    let mut contact = Vec::new();
    let mut details = Vec::new();
    let mut statements = Vec::new();
    let mut attachments = Vec::new();
    for field in schema.scored_fields() {
        let Some(value) = gold.get(&field.field_id) else {
            continue;
        };
        let id = field.field_id.as_str();
        match field.field_type {
            FieldType::Description => {
                statements.push(format!("### {}\n\n{}\n", field.label, value))
            }
            FieldType::FileUpload => attachments.push(format!("- {}: {}", field.label, value)),
            FieldType::StringInput
                if id.contains("email")
                    || id.contains("phone")
                    || id.contains("address")
                    || id == "city" =>
            {
                contact.push(format!("- {}: {}", field.label, value))
            }
            FieldType::StringInput if id == "full_name" || id == "applicant_name" => {}
            _ => details.push(format!("- {}: {}", field.label, value)),
        }
    }
    let mut experience = Vec::new();
    for _ in 0..rng.gen_range(2..=3) {
        let start = rng.gen_range(2005..2020);
        experience.push(format!(
            "- {} at {} {} ({}-{}). {}",
            JOB_TITLES.choose(rng).unwrap(),
            ORG_STEMS.choose(rng).unwrap(),
            ORG_SUFFIXES.choose(rng).unwrap(),
            start,
            start + rng.gen_range(1..5),
            sentences(rng, 1)
        ));
    }
    let degree = ["PhD", "MSc", "MA", "BSc"].choose(rng).unwrap();
    let mut out = format!("# {name}\n\n## Contact\n\n");
    out.push_str(&contact.join("\n"));
    out.push_str("\n\n## Application\n\n");
    out.push_str(&details.join("\n"));
    out.push_str("\n\n## Statements\n\n");
    out.push_str(&statements.join("\n"));
    out.push_str("\n## Experience\n\n");
    out.push_str(&experience.join("\n"));
    out.push_str(&format!(
        "\n\n## Education\n\n- {degree} in {}\n",
        DEPARTMENTS.choose(rng).unwrap()
    ));
    if !attachments.is_empty() {
        out.push_str("\n## Attachments\n\n");
        out.push_str(&attachments.join("\n"));
        out.push('\n');
    }
    out
}

/// Writes the context document for `gold`.
///
/// With a generator, the versioned prompt is sent to it; otherwise a
/// deterministic template driven by `rng` is used. Either way every gold value
/// is guaranteed to occur verbatim in the result.
pub fn generate_context_document<R: Rng + ?Sized>(
    schema: &FormSchema,
    gold: &BTreeMap<String, String>,
    generator: Option<&dyn TextGenerator>,
    rng: &mut R,
) -> Result<String, GeneratorError> {
    let draft = match generator {
        Some(g) => g.generate(&context_prompt(schema, gold))?,
        None if is_resume_form(schema) => templated_resume(schema, gold, rng),
        None => templated_note(schema, gold, rng),
    };
    Ok(enforce_containment(schema, gold, draft))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_catalog, find_form};
    use crate::datagen::sampler::{sample_gold_values, sample_stream};

    struct Forgetful;

    impl TextGenerator for Forgetful {
        fn generate(&self, prompt: &str) -> Result<String, GeneratorError> {
            // Mentions only the first fact.
            let first = prompt.lines().find(|l| l.starts_with("- ")).unwrap_or("");
            Ok(format!(
                "I am filling this in today. {}",
                first.splitn(2, ": ").nth(1).unwrap_or("")
            ))
        }
    }

    struct Down;

    impl TextGenerator for Down {
        fn generate(&self, _: &str) -> Result<String, GeneratorError> {
            Err(GeneratorError::Unavailable("connection refused".into()))
        }
    }

    #[test]
    fn templated_documents_contain_every_value() {
        for schema in builtin_catalog() {
            let mut rng = sample_stream(11, &schema.form_id, 0);
            let gold = sample_gold_values(&schema, &mut rng);
            let doc = generate_context_document(&schema, &gold, None, &mut rng).unwrap();
            assert!(
                missing_values(&schema, &gold, &doc).is_empty(),
                "{}",
                schema.form_id
            );
        }
    }

    #[test]
    fn small_example() {
        let schema = FormSchema {
            form_id: "tiny".into(),
            name: "Tiny Form".into(),
            domain_category: crate::schema::DomainCategory::ProfessionalBusiness,
            page_count: 1,
            theme_id: "plain".into(),
            fields: vec![
                FieldSpec::new("company", "Company", FieldType::StringInput),
                FieldSpec::new("founded", "Founded", FieldType::Date),
            ],
        };
        let gold = BTreeMap::from([
            ("company".to_string(), "Northwind".to_string()),
            ("founded".to_string(), "2019-03-12".to_string()),
        ]);
        let doc = generate_context_document(&schema, &gold, None, &mut sample_stream(0, "tiny", 0))
            .unwrap();
        assert!(doc.contains("Northwind") && doc.contains("2019-03-12"));
    }

    #[test]
    fn templated_is_deterministic() {
        let catalog = builtin_catalog();
        let schema = find_form(&catalog, "university_job_application").unwrap();
        let run = || {
            let mut rng = sample_stream(5, &schema.form_id, 3);
            let gold = sample_gold_values(schema, &mut rng);
            generate_context_document(schema, &gold, None, &mut rng).unwrap()
        };
        let doc = run();
        assert_eq!(doc, run());
        assert!(doc.starts_with("# ") && doc.contains("## Experience"));
    }

    #[test]
    fn post_pass_repairs_external_output() {
        let catalog = builtin_catalog();
        let schema = find_form(&catalog, "startup_funding").unwrap();
        let mut rng = sample_stream(5, &schema.form_id, 0);
        let gold = sample_gold_values(schema, &mut rng);
        let draft = Forgetful.generate(&context_prompt(schema, &gold)).unwrap();
        assert!(!missing_values(schema, &gold, &draft).is_empty());
        let doc = generate_context_document(schema, &gold, Some(&Forgetful), &mut rng).unwrap();
        assert!(missing_values(schema, &gold, &doc).is_empty());
        assert!(doc.contains("Also, the "));
    }

    #[test]
    fn unavailable_generator_surfaces() {
        let catalog = builtin_catalog();
        let schema = &catalog[0];
        let gold = sample_gold_values(schema, &mut sample_stream(0, &schema.form_id, 0));
        let err =
            generate_context_document(schema, &gold, Some(&Down), &mut sample_stream(0, "x", 0))
                .unwrap_err();
        assert!(matches!(err, GeneratorError::Unavailable(_)));
    }

    #[test]
    fn prompt_lists_facts() {
        let catalog = builtin_catalog();
        let schema = find_form(&catalog, "bug_report").unwrap();
        let gold = sample_gold_values(schema, &mut sample_stream(0, &schema.form_id, 0));
        let p = context_prompt(schema, &gold);
        assert!(p.contains(&schema.name));
        for v in gold.values() {
            assert!(p.contains(v.as_str()));
        }
        assert_eq!(prompt_hash().len(), 64);
    }
}
