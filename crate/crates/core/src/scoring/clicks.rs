//! Click attribution and per-field click correctness.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::value::scan_normalize;
use super::ScoringError;
use crate::env::Action;
use crate::render::{LayoutTree, WidgetKind};
use crate::schema::{FieldType, FormSchema};
use crate::values::MULTI_SEPARATOR;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClickVerdict {
    pub field_id: String,
    /// `None` when no click was attributed to the field.
    pub click_correct: Option<bool>,
    pub attributed_clicks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClickScore {
    pub per_field: Vec<ClickVerdict>,
    pub unattributed_clicks: usize,
}

impl ClickScore {
    pub fn get(&self, field_id: &str) -> Option<&ClickVerdict> {
        self.per_field.iter().find(|v| v.field_id == field_id)
    }
}

/// Length of the longest common subsequence of two char sequences.
pub fn lcs_len(a: &[char], b: &[char]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &ca in a {
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// LCS length over the longer length, on output-scan-normalized text.
pub fn lcs_similarity(a: &str, b: &str) -> f64 {
    let a: Vec<char> = scan_normalize(a).chars().collect();
    let b: Vec<char> = scan_normalize(b).chars().collect();
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 0.0;
    }
    lcs_len(&a, &b) as f64 / longest as f64
}

/// Widgets whose clicks belong to their owner field regardless of typing.
fn owner_attributed(kind: WidgetKind) -> bool {
    matches!(
        kind,
        WidgetKind::DropdownHead
            | WidgetKind::DropdownOption
            | WidgetKind::RadioDot
            | WidgetKind::CheckboxSquare
            | WidgetKind::DateBox
            | WidgetKind::CalendarNav
            | WidgetKind::CalendarCell
            | WidgetKind::FileButton
            | WidgetKind::FileDialogBox
    )
}

/// Attributes every `Click` to an intended field and judges it.
///
/// `layouts[i]` must be the layout the `i`-th action was applied to.
///
/// * A click on an option, checkbox, date or file widget belongs to that
///   widget's field. For option fields it is correct only on a gold option's
///   box; otherwise any box of the field is correct.
/// * Any other click followed (before the next click) by typing belongs to the
///   gold field whose value is most similar to the typed text (ties go to the
///   earlier field) and is correct if it landed in a box of that field.
/// * Remaining clicks are unattributed and only counted.
pub fn score_clicks(
    schema: &FormSchema,
    actions: &[Action],
    layouts: &[LayoutTree],
    gold: &BTreeMap<String, String>,
) -> Result<ClickScore, ScoringError> {
    if actions.len() != layouts.len() {
        return Err(ScoringError::MisalignedHistory {
            actions: actions.len(),
            layouts: layouts.len(),
        });
    }
    let scored: Vec<_> = schema
        .scored_fields()
        .filter(|f| gold.contains_key(&f.field_id))
        .collect();
    let text_fields: Vec<_> = scored
        .iter()
        .filter(|f| f.field_type.accepts_text())
        .collect();
    let mut tally: BTreeMap<&str, (usize, bool)> = scored
        .iter()
        .map(|f| (f.field_id.as_str(), (0, false)))
        .collect();
    let mut unattributed = 0;

    for (i, action) in actions.iter().enumerate() {
        let Action::Click { x, y } = action else {
            continue;
        };
        let hit = layouts[i].hit_test(*x, *y);
        if let Some(w) = hit.filter(|w| owner_attributed(w.kind)) {
            let owner = w.owner_field_id.as_deref().unwrap_or_default();
            let Some(entry) = tally.get_mut(owner) else {
                unattributed += 1;
                continue;
            };
            let field = schema.field(owner).expect("tallied fields exist");
            let correct = if field.field_type.has_options() {
                matches!(
                    w.kind,
                    WidgetKind::DropdownOption | WidgetKind::RadioDot | WidgetKind::CheckboxSquare
                ) && w.option_index.is_some_and(|idx| {
                    let g = &gold[owner];
                    let wanted: Vec<&str> = if field.field_type == FieldType::MultipleChoice {
                        g.split(MULTI_SEPARATOR).collect()
                    } else {
                        vec![g.as_str()]
                    };
                    field
                        .options
                        .get(idx)
                        .is_some_and(|o| wanted.contains(&o.as_str()))
                })
            } else {
                true
            };
            entry.0 += 1;
            entry.1 |= correct;
            continue;
        }

        let typed: String = actions[i + 1..]
            .iter()
            .take_while(|a| !matches!(a, Action::Click { .. }))
            .filter_map(|a| match a {
                Action::Type { text } => Some(text.as_str()),
                _ => None,
            })
            .collect();
        if typed.is_empty() || text_fields.is_empty() {
            unattributed += 1;
            continue;
        }
        let mut best: Option<(&str, f64)> = None;
        for f in &text_fields {
            let sim = lcs_similarity(&typed, &gold[&f.field_id]);
            if best.is_none_or(|(_, s)| sim > s) {
                best = Some((&f.field_id, sim));
            }
        }
        let (target, _) = best.expect("text_fields is non-empty");
        let correct = hit.is_some_and(|w| w.owned_by(target));
        let entry = tally.get_mut(target).expect("target is scored");
        entry.0 += 1;
        entry.1 |= correct;
    }

    Ok(ClickScore {
        per_field: scored
            .iter()
            .map(|f| {
                let (n, ok) = tally[f.field_id.as_str()];
                ClickVerdict {
                    field_id: f.field_id.clone(),
                    click_correct: (n > 0).then_some(ok),
                    attributed_clicks: n,
                }
            })
            .collect(),
        unattributed_clicks: unattributed,
    })
}
