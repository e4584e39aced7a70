//! Canonical value strings.
//!
//! Every field value, whether sampled as gold or read back out of a session,
//! is reduced to exactly one canonical string so scoring is a string compare:
//!
//! * dates are `YYYY-MM-DD`
//! * decimals have no thousands separators and at most 2 fraction digits
//! * option fields use the option's display text; multi-selects join the
//!   selected options with `;` in option order
//! * a ticked single checkbox is [`CHECKED`]

use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::schema::{FieldSpec, FieldType};

/// Canonical value of a ticked `CheckboxInput`.
pub const CHECKED: &str = "checked";

pub const MULTI_SEPARATOR: char = ';';

/// The live value held by a field in a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum FieldValue {
    /// Free text as typed: string, description, numeric and date fields.
    Text(String),
    /// Single selected option index (dropdown, binary choice).
    Choice(usize),
    /// Selected option indices (multiple choice).
    Choices(BTreeSet<usize>),
    /// Single checkbox.
    Checked(bool),
    /// Recorded upload path.
    File(String),
}

pub fn format_date(date: NaiveDate) -> String {
    date.format("%Y-%m-%d").to_string()
}

pub fn parse_date(text: &str) -> Option<NaiveDate> {
    let t = text.trim();
    // chrono accepts unpadded months/days with %m/%d; require the exact shape.
    let b = t.as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return None;
    }
    NaiveDate::parse_from_str(t, "%Y-%m-%d").ok()
}

/// Formats a decimal with at most two fraction digits and no trailing zeros.
pub fn format_decimal(value: f64) -> String {
    let mut s = format!("{:.2}", value);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

pub fn parse_decimal(text: &str) -> Option<f64> {
    let cleaned: String = text.trim().chars().filter(|c| *c != ',').collect();
    if cleaned.is_empty() {
        return None;
    }
    let v: f64 = cleaned.parse().ok()?;
    v.is_finite().then_some(v)
}

/// Trims and collapses internal whitespace runs to single spaces.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Joins the selected options in option order.
pub fn join_choices(options: &[String], selected: &BTreeSet<usize>) -> String {
    selected
        .iter()
        .filter_map(|&i| options.get(i).map(String::as_str))
        .collect::<Vec<_>>()
        .join(";")
}

/// Canonical string for a field's live value; `None` when the field is unset.
pub fn canonical_value(field: &FieldSpec, value: &FieldValue) -> Option<String> {
    let canonical = match (field.field_type, value) {
        (FieldType::Date, FieldValue::Text(t)) => match parse_date(t) {
            Some(d) => format_date(d),
            None => normalize_whitespace(t),
        },
        (FieldType::NumericInput, FieldValue::Text(t)) => match parse_decimal(t) {
            Some(v) => format_decimal(v),
            None => normalize_whitespace(t),
        },
        (_, FieldValue::Text(t)) | (_, FieldValue::File(t)) => normalize_whitespace(t),
        (_, FieldValue::Choice(i)) => field.options.get(*i)?.clone(),
        (_, FieldValue::Choices(set)) => join_choices(&field.options, set),
        (_, FieldValue::Checked(true)) => CHECKED.to_string(),
        (_, FieldValue::Checked(false)) => String::new(),
    };
    (!canonical.is_empty()).then_some(canonical)
}

/// Canonicalizes a gold or externally supplied string for a given field type.
pub fn canonicalize_text(field_type: FieldType, text: &str) -> String {
    match field_type {
        FieldType::Date => parse_date(text)
            .map(format_date)
            .unwrap_or_else(|| normalize_whitespace(text)),
        FieldType::NumericInput => parse_decimal(text)
            .map(format_decimal)
            .unwrap_or_else(|| normalize_whitespace(text)),
        _ => normalize_whitespace(text),
    }
}

/// Is `text` already in canonical form for `field`?
pub fn is_canonical(field: &FieldSpec, text: &str) -> bool {
    if text.is_empty() {
        return false;
    }
    match field.field_type {
        FieldType::Date => parse_date(text).map(format_date).as_deref() == Some(text),
        FieldType::NumericInput => parse_decimal(text).map(format_decimal).as_deref() == Some(text),
        FieldType::Dropdown | FieldType::BinaryChoice => field.option_index(text).is_some(),
        FieldType::MultipleChoice => {
            let mut last = None;
            for part in text.split(MULTI_SEPARATOR) {
                match field.option_index(part) {
                    Some(i) if last.is_none_or(|l| i > l) => last = Some(i),
                    _ => return false,
                }
            }
            true
        }
        FieldType::CheckboxInput => text == CHECKED,
        _ => normalize_whitespace(text) == text,
    }
}
