//! Gold value sampling from a form schema.

use std::collections::BTreeMap;

use chrono::{Duration, NaiveDate};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::words::*;
use crate::schema::{FieldSpec, FieldType, FormSchema};
use crate::values::{format_date, format_decimal, parse_decimal, CHECKED};

/// Domain used for every generated email address.
pub const PLACEHOLDER_EMAIL_DOMAIN: &str = "example.com";

pub const DATE_MIN: (i32, u32, u32) = (2015, 1, 1);
pub const DATE_MAX: (i32, u32, u32) = (2030, 12, 31);

/// Field ids that name the person the form is about. They all share one
/// sampled identity so the email and name of an applicant agree.
const PRIMARY_PERSON_IDS: &[&str] = &[
    "full_name",
    "applicant_name",
    "founder_name",
    "participant_name",
    "patient_name",
    "student_name",
    "policyholder_name",
    "speaker_name",
    "author_name",
    "artist_name",
    "reporter_name",
    "requester_name",
    "client_name",
    "contractor_name",
    "signatory_name",
    "contact_name",
];

/// The random stream owned by one sample: a function of the dataset seed, the
/// form and the sample's index only.
pub fn sample_stream(seed: u64, form_id: &str, sample_index: usize) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(form_id.as_bytes());
    hasher.update([0]);
    hasher.update((sample_index as u64).to_le_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

fn pick<'a, R: Rng + ?Sized>(rng: &mut R, list: &[&'a str]) -> &'a str {
    list.choose(rng).copied().expect("word lists are non-empty")
}

#[derive(Debug, Clone)]
struct Person {
    first: String,
    last: String,
}

impl Person {
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Person {
        Person {
            first: pick(rng, FIRST_NAMES).to_string(),
            last: pick(rng, LAST_NAMES).to_string(),
        }
    }

    fn full(&self) -> String {
        format!("{} {}", self.first, self.last)
    }

    fn email(&self) -> String {
        format!(
            "{}.{}@{PLACEHOLDER_EMAIL_DOMAIN}",
            self.first.to_lowercase(),
            self.last.to_lowercase()
        )
    }
}

struct Identity {
    person: Person,
    city: &'static str,
    org_stem: &'static str,
}

fn organization<R: Rng + ?Sized>(rng: &mut R, stem: &str) -> String {
    format!("{stem} {}", pick(rng, ORG_SUFFIXES))
}

fn fill_pattern<R: Rng + ?Sized>(rng: &mut R, patterns: &[&str]) -> String {
    pick(rng, patterns)
        .replace("{city}", pick(rng, CITIES))
        .replace("{stem}", pick(rng, ORG_STEMS))
        .replace("{last}", pick(rng, LAST_NAMES))
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn title_case(s: &str) -> String {
    s.split(' ').map(capitalize).collect::<Vec<_>>().join(" ")
}

fn digits<R: Rng + ?Sized>(rng: &mut R, n: usize) -> String {
    (0..n)
        .map(|_| char::from(b'0' + rng.gen_range(0..10u8)))
        .collect()
}

fn phone<R: Rng + ?Sized>(rng: &mut R) -> String {
    // 555-01xx numbers are reserved for fiction.
    format!(
        "({}) 555-01{:02}",
        rng.gen_range(201..990),
        rng.gen_range(0..100)
    )
}

/// One to three sentences of free text.
pub fn sentences<R: Rng + ?Sized>(rng: &mut R, count: usize) -> String {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let s = match rng.gen_range(0..5) {
            0 => format!(
                "Our work {} {} for {}.",
                pick(rng, VERBS),
                pick(rng, NOUNS),
                pick(rng, AUDIENCES)
            ),
            1 => format!(
                "The main goal is to make {} more {}.",
                pick(rng, NOUNS),
                pick(rng, ADJECTIVES)
            ),
            2 => format!(
                "I have spent {} years building {} {}.",
                rng.gen_range(2..15),
                pick(rng, ADJECTIVES),
                pick(rng, NOUNS)
            ),
            3 => format!(
                "This {} approach {} how {} use {}.",
                pick(rng, ADJECTIVES),
                pick(rng, VERBS),
                pick(rng, AUDIENCES),
                pick(rng, NOUNS)
            ),
            _ => format!(
                "We expect the results to help {} adopt {} {}.",
                pick(rng, AUDIENCES),
                pick(rng, ADJECTIVES),
                pick(rng, NOUNS)
            ),
        };
        out.push(s);
    }
    out.join(" ")
}

fn string_value<R: Rng + ?Sized>(field: &FieldSpec, who: &Identity, rng: &mut R) -> String {
    let id = field.field_id.as_str();
    let label = field.label.to_lowercase();
    if PRIMARY_PERSON_IDS.contains(&id) {
        return who.person.full();
    }
    if id.contains("email") {
        return if id == "email" || id == "contact_email" {
            who.person.email()
        } else {
            Person::sample(rng).email()
        };
    }
    if label.contains("extension") {
        return format!("ext. {}", digits(rng, 4));
    }
    if id.contains("phone") {
        return phone(rng);
    }
    match id {
        "postal_code" => return digits(rng, 5),
        "street_address" => {
            return format!(
                "{} {} {}",
                rng.gen_range(1..2000),
                pick(rng, STREETS),
                pick(rng, STREET_SUFFIXES)
            )
        }
        "address" | "current_address" | "shipping_address" => {
            return format!(
                "{} {} {}, {}",
                rng.gen_range(1..2000),
                pick(rng, STREETS),
                pick(rng, STREET_SUFFIXES),
                who.city
            )
        }
        "city" => return who.city.to_string(),
        "country" => return pick(rng, COUNTRIES).to_string(),
        "website" => {
            return format!(
                "https://{}.{PLACEHOLDER_EMAIL_DOMAIN}",
                who.org_stem.to_lowercase()
            )
        }
        "authors" => {
            let n = rng.gen_range(1..4);
            let mut names = vec![who.person.full()];
            names.extend((0..n).map(|_| Person::sample(rng).full()));
            return names.join(", ");
        }
        "keywords" => {
            let picks = index::sample(rng, NOUNS.len(), 3);
            return picks
                .iter()
                .map(|i| NOUNS[i])
                .collect::<Vec<_>>()
                .join(", ");
        }
        "abstract" => return sentences(rng, 2),
        "title" | "project_title" | "talk_title" => {
            return format!(
                "{} {} {} for {}",
                pick(rng, TITLE_HEADS),
                title_case(pick(rng, ADJECTIVES)),
                title_case(pick(rng, NOUNS)),
                title_case(pick(rng, AUDIENCES))
            )
        }
        "artwork_title" | "piece_title" => {
            return format!("{} of {}", pick(rng, ART_WORDS), pick(rng, ART_WORDS))
        }
        "pen_name" => return format!("{}. {}", &who.person.first[..1], pick(rng, ART_WORDS)),
        "project_name" => return format!("Project {}", pick(rng, ORG_STEMS)),
        "position_title" | "job_title" => return pick(rng, JOB_TITLES).to_string(),
        "company_name" | "disclosing_party" => return organization(rng, who.org_stem),
        "bank_name" => return format!("{} {}", pick(rng, ORG_STEMS), pick(rng, BANK_SUFFIXES)),
        "university" => return fill_pattern(rng, UNIVERSITY_PATTERNS),
        "hospital" | "provider_name" => return fill_pattern(rng, HOSPITAL_PATTERNS),
        "department" => return pick(rng, DEPARTMENTS).to_string(),
        "major" => return pick(rng, MAJORS).to_string(),
        "procedure_name" => return pick(rng, PROCEDURES).to_string(),
        "jurisdiction" => return pick(rng, JURISDICTIONS).to_string(),
        "operating_system" => return pick(rng, OPERATING_SYSTEMS).to_string(),
        "software_version" => {
            return format!(
                "{}.{}.{}",
                rng.gen_range(1..10),
                rng.gen_range(0..20),
                rng.gen_range(0..10)
            )
        }
        "student_id" => return format!("S{}", digits(rng, 7)),
        "policy_number" => return format!("POL-{}", digits(rng, 6)),
        "asset_tag" => return format!("IT-{}", digits(rng, 5)),
        "tax_id" => return format!("{}-{}", digits(rng, 2), digits(rng, 7)),
        "drivers_license" => {
            return format!("D{}-{}-{}", digits(rng, 3), digits(rng, 4), digits(rng, 4))
        }
        "license_number" => return format!("LIC-{}", digits(rng, 6)),
        "product_sku" => {
            let letters: String = (0..4)
                .map(|_| char::from(b'A' + rng.gen_range(0..26u8)))
                .collect();
            return format!("SKU-{letters}-{}", digits(rng, 3));
        }
        _ => {}
    }
    if id.contains("name")
        || id.contains("contact")
        || id.contains("investigator")
        || id.contains("advisor")
    {
        return Person::sample(rng).full();
    }
    if label.contains("employer") || label.contains("organization") || label.contains("party") {
        let stem = pick(rng, ORG_STEMS);
        return organization(rng, stem);
    }
    organization(rng, who.org_stem)
}

fn numeric_value<R: Rng + ?Sized>(field: &FieldSpec, rng: &mut R) -> String {
    // Validation guarantees a range; the fallback only serves hand-built specs.
    let (min, max) = field.numeric_range.map_or((0.0, 100.0), |r| (r.min, r.max));
    let raw = if max > min {
        rng.gen_range(min..=max)
    } else {
        min
    };
    // Measurements get one decimal place, money and counts are whole.
    let label = field.label.to_lowercase();
    let fractional = label.contains('(') && !label.contains("usd") && !label.contains("year");
    let mut v = if fractional {
        (raw * 10.0).round() / 10.0
    } else {
        raw.round()
    };
    if !fractional && max - min >= 20_000.0 {
        v = (raw / 100.0).round() * 100.0;
    }
    let v = v.clamp(min, max);
    let text = format_decimal(v);
    match parse_decimal(&text) {
        Some(p) if p >= min && p <= max => text,
        _ => format_decimal(min),
    }
}

fn date_value<R: Rng + ?Sized>(rng: &mut R) -> String {
    let lo = NaiveDate::from_ymd_opt(DATE_MIN.0, DATE_MIN.1, DATE_MIN.2).unwrap();
    let hi = NaiveDate::from_ymd_opt(DATE_MAX.0, DATE_MAX.1, DATE_MAX.2).unwrap();
    let span = (hi - lo).num_days();
    format_date(lo + Duration::days(rng.gen_range(0..=span)))
}

fn file_value<R: Rng + ?Sized>(field: &FieldSpec, who: &Identity, rng: &mut R) -> String {
    let label = field.label.to_lowercase();
    let ext = if ["photo", "image", "headshot", "screenshot"]
        .iter()
        .any(|k| label.contains(k))
    {
        *["png", "jpg"].choose(rng).unwrap()
    } else if label.contains("design") {
        "svg"
    } else if label.contains("statement") || label.contains("bill") {
        *["pdf", "xlsx"].choose(rng).unwrap()
    } else {
        *["pdf", "docx"].choose(rng).unwrap()
    };
    format!(
        "/home/{}/Documents/{}_{}.{ext}",
        who.person.first.to_lowercase(),
        field.field_id,
        pick(rng, FILE_STEMS)
    )
}

/// Samples a canonical gold value for every scored field of `schema`.
pub fn sample_gold_values<R: Rng + ?Sized>(
    schema: &FormSchema,
    rng: &mut R,
) -> BTreeMap<String, String> {
    let who = Identity {
        person: Person::sample(rng),
        city: pick(rng, CITIES),
        org_stem: pick(rng, ORG_STEMS),
    };
    let mut gold = BTreeMap::new();
    for field in schema.scored_fields() {
        let value = match field.field_type {
            FieldType::StringInput => string_value(field, &who, rng),
            FieldType::Description => {
                let n = rng.gen_range(1..=3);
                sentences(rng, n)
            }
            FieldType::Dropdown | FieldType::BinaryChoice => {
                field.options.choose(rng).cloned().unwrap_or_default()
            }
            FieldType::MultipleChoice => {
                let n = field.options.len();
                let k = rng.gen_range(1..=n.min(3));
                let mut picked = index::sample(rng, n, k).into_vec();
                picked.sort_unstable();
                picked
                    .iter()
                    .map(|&i| field.options[i].as_str())
                    .collect::<Vec<_>>()
                    .join(";")
            }
            FieldType::CheckboxInput => CHECKED.to_string(),
            FieldType::Date => date_value(rng),
            FieldType::NumericInput => numeric_value(field, rng),
            FieldType::FileUpload => file_value(field, &who, rng),
        };
        gold.insert(field.field_id.clone(), value);
    }
    gold
}
