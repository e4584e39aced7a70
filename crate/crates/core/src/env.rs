//! The interactive environment: per-session widget state driven by pixel
//! actions.
//!
//! A session is a strictly serialized state machine. [`EnvState::step`]
//! hit-tests the action against the current page layout and applies the
//! transition of the widget it lands on:
//!
//! | target            | `Click` effect                                        |
//! |-------------------|-------------------------------------------------------|
//! | text box / area / numeric box | focus it                                  |
//! | date box          | focus it and toggle its calendar                      |
//! | dropdown head     | toggle its option list                                |
//! | dropdown option   | select it, close the list                             |
//! | checkbox          | toggle membership                                     |
//! | radio dot         | select exclusively                                    |
//! | file button       | open the path dialog; again to confirm the typed path |
//! | calendar arrow    | move the visible month by its delta                   |
//! | calendar day      | set the date, close the calendar                      |
//! | next / submit     | turn the page / end the session                       |
//! | background        | close overlays, drop focus                            |
//!
//! `Type` appends to the focused text-like widget. `DoubleClick` on a
//! text-like widget clears it and elsewhere acts as a `Click`; `RightClick`
//! never has an effect.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::datagen::GoldRecord;
use crate::render::layout::{compute_layout, shift_month, DEFAULT_CALENDAR_MONTH};
use crate::render::{
    overlay_ruler, render, Bitmap, LayoutError, LayoutTree, Overlay, RenderState, Theme, Viewport,
    Widget, WidgetKind, RULER_MAJOR_PX, RULER_MINOR_PX,
};
use crate::schema::{FieldType, FormSchema};
use crate::values::{canonical_value, format_date, parse_date, FieldValue};
use chrono::{Datelike, NaiveDate};

pub const DEFAULT_STEP_CAP: u32 = 500;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    Click { x: i32, y: i32 },
    DoubleClick { x: i32, y: i32 },
    RightClick { x: i32, y: i32 },
    Type { text: String },
}

impl Action {
    pub fn click(x: i32, y: i32) -> Action {
        Action::Click { x, y }
    }

    pub fn click_at((x, y): (i32, i32)) -> Action {
        Action::Click { x, y }
    }

    pub fn type_text(text: impl Into<String>) -> Action {
        Action::Type { text: text.into() }
    }

    pub fn point(&self) -> Option<(i32, i32)> {
        match self {
            Action::Click { x, y } | Action::DoubleClick { x, y } | Action::RightClick { x, y } => {
                Some((*x, *y))
            }
            Action::Type { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Focused,
    TextEntered,
    OptionSelected,
    Toggled,
    DateChosen,
    PageTurned,
    FileRecorded,
    Submitted,
    NoEffect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepEvent {
    pub kind: EventKind,
    pub field_id: Option<String>,
    pub detail: String,
}

impl StepEvent {
    fn new(kind: EventKind, field_id: Option<&str>, detail: impl Into<String>) -> StepEvent {
        StepEvent {
            kind,
            field_id: field_id.map(str::to_string),
            detail: detail.into(),
        }
    }

    fn none(detail: impl Into<String>) -> StepEvent {
        StepEvent::new(EventKind::NoEffect, None, detail)
    }
}

/// Detail string of the `NoEffect` event emitted for `Type` without focus.
pub const NO_FOCUS_FOR_TYPE: &str = "NoFocusForType";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Submitted,
    StepCap,
    /// Ended from outside the page, e.g. by a service-level submit.
    Closed,
}

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("sample belongs to form `{sample_form}`, not `{schema_form}`")]
    SchemaSampleMismatch {
        schema_form: String,
        sample_form: String,
    },
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("session is terminated")]
    SessionTerminated,
    #[error("invalid action: {0}")]
    InvalidAction(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    #[serde(skip)]
    pub screenshot: Option<Bitmap>,
    pub screenshot_digest: String,
    pub page_index: usize,
    pub page_count: usize,
    pub viewport: Viewport,
    pub step_count: u32,
}

impl Observation {
    pub fn screenshot(&self) -> &Bitmap {
        self.screenshot
            .as_ref()
            .expect("observation carries its screenshot")
    }
}

/// Fields that define widget state; compared to detect `NoEffect`.
#[derive(Debug, Clone, PartialEq)]
struct Snapshot {
    page: usize,
    values: BTreeMap<String, FieldValue>,
    focused: Option<String>,
    overlay: Option<Overlay>,
    file_draft: String,
    submitted: bool,
}

/// Session configuration sufficient to recreate a session bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub form_id: String,
    pub sample_id: String,
    pub theme_id: String,
    pub viewport: Viewport,
    pub ruler_on: bool,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct EnvState {
    session_id: String,
    schema: Arc<FormSchema>,
    sample: Arc<GoldRecord>,
    theme: Theme,
    viewport: Viewport,
    ruler_on: bool,
    seed: u64,
    current_page: usize,
    values: BTreeMap<String, FieldValue>,
    focused: Option<String>,
    overlay: Option<Overlay>,
    file_draft: String,
    submitted: bool,
    termination: Option<Termination>,
    step_count: u32,
    step_cap: u32,
}

/// Creates a fresh session on page 0 with no values.
pub fn create_session(
    schema: Arc<FormSchema>,
    sample: Arc<GoldRecord>,
    theme: Theme,
    viewport: Viewport,
    ruler_on: bool,
    seed: u64,
) -> Result<EnvState, EnvError> {
    if sample.form_id != schema.form_id {
        return Err(EnvError::SchemaSampleMismatch {
            schema_form: schema.form_id.clone(),
            sample_form: sample.form_id.clone(),
        });
    }
    for page in 0..schema.page_count {
        compute_layout(&schema, &theme, viewport, page, None)?;
    }
    let mut hasher = Sha256::new();
    for part in [
        schema.form_id.as_str(),
        sample.sample_id.as_str(),
        theme.theme_id.as_str(),
        &viewport.to_string(),
        if ruler_on { "ruler" } else { "plain" },
        &seed.to_string(),
    ] {
        hasher.update(part.as_bytes());
        hasher.update([0]);
    }
    let session_id = hex::encode(&hasher.finalize()[..16]);
    Ok(EnvState {
        session_id,
        schema,
        sample,
        theme,
        viewport,
        ruler_on,
        seed,
        current_page: 0,
        values: BTreeMap::new(),
        focused: None,
        overlay: None,
        file_draft: String::new(),
        submitted: false,
        termination: None,
        step_count: 0,
        step_cap: DEFAULT_STEP_CAP,
    })
}

impl EnvState {
    pub fn with_step_cap(mut self, cap: u32) -> Self {
        self.step_cap = cap.max(1);
        self
    }

    pub fn session_id(&self) -> &str {
        &self.session_id
    }

    pub fn schema(&self) -> &FormSchema {
        &self.schema
    }

    pub fn schema_arc(&self) -> Arc<FormSchema> {
        Arc::clone(&self.schema)
    }

    pub fn sample(&self) -> &GoldRecord {
        &self.sample
    }

    pub fn theme(&self) -> &Theme {
        &self.theme
    }

    pub fn viewport(&self) -> Viewport {
        self.viewport
    }

    pub fn ruler_on(&self) -> bool {
        self.ruler_on
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn current_page(&self) -> usize {
        self.current_page
    }

    pub fn page_count(&self) -> usize {
        self.schema.page_count
    }

    pub fn values(&self) -> &BTreeMap<String, FieldValue> {
        &self.values
    }

    pub fn focused(&self) -> Option<&str> {
        self.focused.as_deref()
    }

    pub fn overlay(&self) -> Option<&Overlay> {
        self.overlay.as_ref()
    }

    pub fn submitted(&self) -> bool {
        self.submitted
    }

    pub fn termination(&self) -> Option<Termination> {
        self.termination
    }

    /// Ends a live session without a Submit click. No-op once terminated.
    pub fn close(&mut self) {
        if !self.submitted {
            self.close_overlay();
            self.focused = None;
            self.submitted = true;
            self.termination = Some(Termination::Closed);
        }
    }

    pub fn step_count(&self) -> u32 {
        self.step_count
    }

    pub fn step_cap(&self) -> u32 {
        self.step_cap
    }

    pub fn config(&self) -> SessionConfig {
        SessionConfig {
            form_id: self.schema.form_id.clone(),
            sample_id: self.sample.sample_id.clone(),
            theme_id: self.theme.theme_id.clone(),
            viewport: self.viewport,
            ruler_on: self.ruler_on,
            seed: self.seed,
        }
    }

    /// Layout of the current page including any open overlay.
    pub fn layout(&self) -> LayoutTree {
        compute_layout(
            &self.schema,
            &self.theme,
            self.viewport,
            self.current_page,
            self.overlay.as_ref(),
        )
        .expect("session layouts are checked at creation")
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            page: self.current_page,
            values: self.values.clone(),
            focused: self.focused.clone(),
            overlay: self.overlay.clone(),
            file_draft: self.file_draft.clone(),
            submitted: self.submitted,
        }
    }

    /// Applies one action. Errors leave the state untouched.
    pub fn step(&mut self, action: &Action) -> Result<StepEvent, EnvError> {
        if self.submitted {
            return Err(EnvError::SessionTerminated);
        }
        if let Action::Type { text } = action {
            if text.is_empty() {
                return Err(EnvError::InvalidAction(
                    "Type text must be non-empty".into(),
                ));
            }
        }

        let before = self.snapshot();
        let layout = self.layout();
        let mut event = match action {
            Action::Click { x, y } => self.click(&layout, *x, *y),
            Action::DoubleClick { x, y } => self.double_click(&layout, *x, *y),
            Action::RightClick { .. } => StepEvent::none("right click"),
            Action::Type { text } => self.type_text(&layout, text),
        };
        if event.kind != EventKind::NoEffect && self.snapshot() == before {
            event = StepEvent::new(EventKind::NoEffect, event.field_id.as_deref(), event.detail);
        }

        self.step_count += 1;
        if event.kind == EventKind::Submitted {
            self.termination = Some(Termination::Submitted);
        } else if self.step_count >= self.step_cap {
            self.submitted = true;
            self.termination = Some(Termination::StepCap);
        }
        Ok(event)
    }

    fn close_overlay(&mut self) {
        if matches!(self.overlay, Some(Overlay::FileDialog { .. })) {
            if self
                .focused
                .as_deref()
                .is_some_and(|f| f.starts_with("filedialog:"))
            {
                self.focused = None;
            }
            self.file_draft.clear();
        }
        self.overlay = None;
    }

    fn overlay_is(&self, kind_matches: impl Fn(&Overlay) -> bool) -> bool {
        self.overlay.as_ref().is_some_and(kind_matches)
    }

    fn click(&mut self, layout: &LayoutTree, x: i32, y: i32) -> StepEvent {
        let Some(w) = layout.hit_test(x, y) else {
            if layout.overlay_region.is_some_and(|r| r.contains(x, y)) {
                return StepEvent::none("overlay panel");
            }
            self.close_overlay();
            self.focused = None;
            return StepEvent::new(EventKind::Focused, None, "background: focus cleared");
        };
        let w = w.clone();
        let fid = w.owner_field_id.as_deref();
        let field_id = fid.unwrap_or_default().to_string();

        match w.kind {
            WidgetKind::TextBox | WidgetKind::TextArea | WidgetKind::NumericBox => {
                self.close_overlay();
                self.focused = Some(w.widget_id.clone());
                StepEvent::new(EventKind::Focused, fid, w.widget_id)
            }
            WidgetKind::DateBox => {
                let open_here = self.overlay_is(
                    |o| matches!(o, Overlay::Calendar { field_id: f, .. } if *f == field_id),
                );
                self.close_overlay();
                self.focused = Some(w.widget_id.clone());
                if open_here {
                    StepEvent::new(EventKind::Focused, fid, "calendar closed")
                } else {
                    let (year, month) = self.calendar_start(&field_id);
                    self.overlay = Some(Overlay::Calendar {
                        field_id: field_id.clone(),
                        year,
                        month,
                    });
                    StepEvent::new(
                        EventKind::Focused,
                        fid,
                        format!("calendar {year:04}-{month:02}"),
                    )
                }
            }
            WidgetKind::DropdownHead => {
                let open_here = self.overlay_is(
                    |o| matches!(o, Overlay::Dropdown { field_id: f } if *f == field_id),
                );
                self.close_overlay();
                self.focused = None;
                if open_here {
                    StepEvent::new(EventKind::Focused, fid, "dropdown closed")
                } else {
                    self.overlay = Some(Overlay::Dropdown {
                        field_id: field_id.clone(),
                    });
                    StepEvent::new(EventKind::Focused, fid, "dropdown opened")
                }
            }
            WidgetKind::DropdownOption | WidgetKind::RadioDot => {
                let index = w.option_index.expect("option widgets carry an index");
                self.values
                    .insert(field_id.clone(), FieldValue::Choice(index));
                self.close_overlay();
                self.focused = None;
                StepEvent::new(
                    EventKind::OptionSelected,
                    fid,
                    w.payload.unwrap_or_default(),
                )
            }
            WidgetKind::CheckboxSquare => {
                self.close_overlay();
                self.focused = None;
                let detail = match w.option_index {
                    Some(index) => {
                        let entry = self
                            .values
                            .entry(field_id.clone())
                            .or_insert_with(|| FieldValue::Choices(Default::default()));
                        let FieldValue::Choices(set) = entry else {
                            unreachable!("multiple-choice fields hold option sets")
                        };
                        if !set.remove(&index) {
                            set.insert(index);
                        }
                        let on = set.contains(&index);
                        if set.is_empty() {
                            self.values.remove(&field_id);
                        }
                        format!(
                            "{} {}",
                            w.payload.unwrap_or_default(),
                            if on { "on" } else { "off" }
                        )
                    }
                    None => {
                        let on =
                            !matches!(self.values.get(&field_id), Some(FieldValue::Checked(true)));
                        if on {
                            self.values
                                .insert(field_id.clone(), FieldValue::Checked(true));
                        } else {
                            self.values.remove(&field_id);
                        }
                        (if on { "on" } else { "off" }).to_string()
                    }
                };
                StepEvent::new(EventKind::Toggled, fid, detail)
            }
            WidgetKind::FileButton => {
                let open_here = self.overlay_is(
                    |o| matches!(o, Overlay::FileDialog { field_id: f } if *f == field_id),
                );
                if open_here {
                    let path = self.file_draft.trim().to_string();
                    self.close_overlay();
                    self.focused = None;
                    if path.is_empty() {
                        StepEvent::new(EventKind::Focused, fid, "file dialog closed without a path")
                    } else {
                        self.values
                            .insert(field_id.clone(), FieldValue::File(path.clone()));
                        StepEvent::new(EventKind::FileRecorded, fid, path)
                    }
                } else {
                    self.close_overlay();
                    self.overlay = Some(Overlay::FileDialog {
                        field_id: field_id.clone(),
                    });
                    self.focused = Some(format!("filedialog:{field_id}"));
                    StepEvent::new(EventKind::Focused, fid, "file dialog opened")
                }
            }
            WidgetKind::FileDialogBox => {
                self.focused = Some(w.widget_id.clone());
                StepEvent::new(EventKind::Focused, fid, w.widget_id)
            }
            WidgetKind::CalendarNav => {
                let delta: i32 = w
                    .widget_id
                    .rsplit(':')
                    .next()
                    .and_then(|d| d.parse().ok())
                    .unwrap_or(0);
                if let Some(Overlay::Calendar { year, month, .. }) = &mut self.overlay {
                    let (ny, nm) = shift_month(*year, *month, delta);
                    *year = ny;
                    *month = nm;
                    StepEvent::new(EventKind::Focused, fid, format!("calendar {ny:04}-{nm:02}"))
                } else {
                    StepEvent::none("calendar closed")
                }
            }
            WidgetKind::CalendarCell => {
                let Some(Overlay::Calendar { year, month, .. }) = self.overlay.clone() else {
                    return StepEvent::none("calendar closed");
                };
                let day: u32 = w
                    .payload
                    .as_deref()
                    .and_then(|d| d.parse().ok())
                    .unwrap_or(1);
                let date = NaiveDate::from_ymd_opt(year, month, day)
                    .expect("calendar cells are real days");
                let text = format_date(date);
                self.values
                    .insert(field_id.clone(), FieldValue::Text(text.clone()));
                self.close_overlay();
                StepEvent::new(EventKind::DateChosen, fid, text)
            }
            WidgetKind::NextButton => {
                self.close_overlay();
                self.focused = None;
                self.current_page = (self.current_page + 1).min(self.schema.page_count - 1);
                StepEvent::new(
                    EventKind::PageTurned,
                    None,
                    format!("page {}", self.current_page),
                )
            }
            WidgetKind::SubmitButton => {
                self.close_overlay();
                self.focused = None;
                self.submitted = true;
                StepEvent::new(EventKind::Submitted, None, "submitted")
            }
            WidgetKind::Label | WidgetKind::RulerTick => {
                unreachable!("hit-test returns interactive widgets")
            }
        }
    }

    fn double_click(&mut self, layout: &LayoutTree, x: i32, y: i32) -> StepEvent {
        let Some(w) = layout.hit_test(x, y).cloned() else {
            return self.click(layout, x, y);
        };
        if !w.kind.is_text_like() {
            return self.click(layout, x, y);
        }
        let fid = w.owner_field_id.clone().unwrap_or_default();
        if w.kind == WidgetKind::FileDialogBox {
            self.file_draft.clear();
        } else {
            self.close_overlay();
            self.values.remove(&fid);
        }
        self.focused = Some(w.widget_id.clone());
        StepEvent::new(EventKind::TextEntered, Some(&fid), "cleared")
    }

    fn type_text(&mut self, layout: &LayoutTree, text: &str) -> StepEvent {
        let Some(target) = self
            .focused
            .as_deref()
            .and_then(|id| layout.widget(id))
            .cloned()
        else {
            return StepEvent::none(NO_FOCUS_FOR_TYPE);
        };
        let fid = target.owner_field_id.clone().unwrap_or_default();
        match target.kind {
            WidgetKind::FileDialogBox => {
                self.file_draft.push_str(text);
            }
            WidgetKind::TextBox
            | WidgetKind::TextArea
            | WidgetKind::NumericBox
            | WidgetKind::DateBox => match self.values.get_mut(&fid) {
                Some(FieldValue::Text(existing)) => existing.push_str(text),
                _ => {
                    self.values
                        .insert(fid.clone(), FieldValue::Text(text.to_string()));
                }
            },
            _ => return StepEvent::none(NO_FOCUS_FOR_TYPE),
        }
        StepEvent::new(EventKind::TextEntered, Some(&fid), text)
    }

    /// Month a date field's calendar opens on: the month of its current value
    /// if that parses, else the fixed default.
    fn calendar_start(&self, field_id: &str) -> (i32, u32) {
        match self.values.get(field_id) {
            Some(FieldValue::Text(t)) => parse_date(t)
                .map(|d| (d.year(), d.month()))
                .unwrap_or(DEFAULT_CALENDAR_MONTH),
            _ => DEFAULT_CALENDAR_MONTH,
        }
    }

    /// Widget-level visual state of the current page.
    pub fn render_state(&self, layout: &LayoutTree) -> RenderState {
        let mut state = RenderState {
            focused: self.focused.clone(),
            ..Default::default()
        };
        for field in self.schema.fields_on_page(self.current_page) {
            let fid = &field.field_id;
            let Some(value) = self.values.get(fid) else {
                continue;
            };
            match (field.field_type, value) {
                (FieldType::Dropdown, FieldValue::Choice(i)) => {
                    if let Some(option) = field.options.get(*i) {
                        state.texts.insert(format!("head:{fid}"), option.clone());
                    }
                    let id = format!("opt:{fid}:{i}");
                    if layout.widget(&id).is_some() {
                        state.marked.insert(id);
                    }
                }
                (FieldType::BinaryChoice, FieldValue::Choice(i)) => {
                    state.marked.insert(format!("radio:{fid}:{i}"));
                }
                (_, FieldValue::Choices(set)) => {
                    for i in set {
                        state.marked.insert(format!("check:{fid}:{i}"));
                    }
                }
                (_, FieldValue::Checked(true)) => {
                    state.marked.insert(format!("check:{fid}"));
                }
                (_, FieldValue::File(path)) => {
                    state.texts.insert(format!("file:{fid}"), path.clone());
                }
                (_, FieldValue::Text(text)) => {
                    state.texts.insert(format!("input:{fid}"), text.clone());
                }
                _ => {}
            }
        }
        match &self.overlay {
            Some(Overlay::FileDialog { field_id }) if !self.file_draft.is_empty() => {
                state
                    .texts
                    .insert(format!("filedialog:{field_id}"), self.file_draft.clone());
            }
            Some(Overlay::Calendar {
                field_id,
                year,
                month,
            }) => {
                if let Some(FieldValue::Text(t)) = self.values.get(field_id) {
                    if let Some(d) =
                        parse_date(t).filter(|d| d.year() == *year && d.month() == *month)
                    {
                        state
                            .marked
                            .insert(format!("cal:{field_id}:day:{}", d.day()));
                    }
                }
            }
            _ => {}
        }
        state
    }

    /// Renders the current page (with ruler when enabled).
    pub fn observe(&self) -> Observation {
        let layout = self.layout();
        let state = self.render_state(&layout);
        let mut bmp =
            render(&layout, &state, &self.theme).expect("session render state matches its layout");
        if self.ruler_on {
            bmp = overlay_ruler(&bmp, RULER_MINOR_PX, RULER_MAJOR_PX);
        }
        Observation {
            screenshot_digest: bmp.digest(),
            screenshot: Some(bmp),
            page_index: self.current_page,
            page_count: self.schema.page_count,
            viewport: self.viewport,
            step_count: self.step_count,
        }
    }

    /// Canonical value of every field that currently holds one.
    pub fn extract_form_values(&self) -> BTreeMap<String, String> {
        self.schema
            .fields
            .iter()
            .filter_map(|f| {
                let value = self.values.get(&f.field_id)?;
                canonical_value(f, value).map(|v| (f.field_id.clone(), v))
            })
            .collect()
    }
}

/// Center of the first interactive widget matching `pred`.
pub fn widget_center(layout: &LayoutTree, pred: impl Fn(&Widget) -> bool) -> Option<(i32, i32)> {
    layout
        .widgets
        .iter()
        .find(|w| w.is_interactive() && pred(w))
        .map(|w| w.bounds.center())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use crate::datagen::Provenance;
    use crate::render::Theme;
    use crate::schema::{DomainCategory, FieldSpec};
    use proptest::prelude::*;

    fn schema() -> Arc<FormSchema> {
        let mut fields = vec![
            FieldSpec::new("company", "Company", FieldType::StringInput),
            FieldSpec::new("stage", "Stage", FieldType::Dropdown)
                .with_options(["Idea", "Seed", "Growth"]),
            FieldSpec::new("remote", "Remote?", FieldType::BinaryChoice)
                .with_options(["Yes", "No"]),
            FieldSpec::new("langs", "Languages", FieldType::MultipleChoice)
                .with_options(["Rust", "Go", "C"]),
            FieldSpec::new("agree", "Agree", FieldType::CheckboxInput),
            FieldSpec::new("founded", "Founded", FieldType::Date),
            FieldSpec::new("notes", "Notes", FieldType::Description),
            FieldSpec::new("staff", "Staff", FieldType::NumericInput).with_range(0.0, 100.0),
            FieldSpec::new("deck", "Deck", FieldType::FileUpload),
            FieldSpec::new("city", "City", FieldType::StringInput),
        ];
        fields[9].page_index = 1;
        Arc::new(FormSchema {
            form_id: "all".into(),
            name: "All Types".into(),
            domain_category: DomainCategory::ProfessionalBusiness,
            page_count: 2,
            theme_id: "plain".into(),
            fields,
        })
    }

    fn sample(form_id: &str) -> Arc<GoldRecord> {
        Arc::new(GoldRecord {
            sample_id: "s0".into(),
            form_id: form_id.into(),
            context_document: String::new(),
            gold: BTreeMap::new(),
            provenance: Provenance::Templated,
        })
    }

    fn session() -> EnvState {
        create_session(
            schema(),
            sample("all"),
            Theme::plain(),
            Viewport::DEFAULT,
            false,
            7,
        )
        .unwrap()
    }

    fn center(env: &EnvState, id: &str) -> (i32, i32) {
        env.layout()
            .widget(id)
            .unwrap_or_else(|| panic!("no widget {id}"))
            .bounds
            .center()
    }

    fn click(env: &mut EnvState, id: &str) -> StepEvent {
        let p = center(env, id);
        env.step(&Action::click_at(p)).unwrap()
    }

    #[test]
    fn fresh_session() {
        let env = session();
        assert_eq!(env.current_page(), 0);
        assert!(!env.submitted());
        assert!(env.extract_form_values().is_empty());
        assert_eq!(env.step_count(), 0);
    }

    #[test]
    fn mismatched_sample_rejected() {
        let err = create_session(
            schema(),
            sample("other"),
            Theme::plain(),
            Viewport::DEFAULT,
            false,
            7,
        )
        .unwrap_err();
        assert!(matches!(err, EnvError::SchemaSampleMismatch { .. }));
    }

    #[test]
    fn equal_sessions_render_identically() {
        let a = session().observe();
        let b = session().observe();
        assert_eq!(a.screenshot().as_bytes(), b.screenshot().as_bytes());
        let env = session();
        assert_eq!(
            env.observe().screenshot_digest,
            env.observe().screenshot_digest
        );
    }

    #[test]
    fn click_then_type() {
        let mut env = session();
        let e1 = click(&mut env, "input:company");
        assert_eq!(e1.kind, EventKind::Focused);
        let e2 = env.step(&Action::type_text("Acme")).unwrap();
        assert_eq!(e2.kind, EventKind::TextEntered);
        assert_eq!(env.extract_form_values()["company"], "Acme");
        env.step(&Action::type_text(" Corp")).unwrap();
        assert_eq!(env.extract_form_values()["company"], "Acme Corp");
    }

    #[test]
    fn type_without_focus_is_no_effect() {
        let mut env = session();
        let before = env.observe().screenshot_digest;
        let e = env.step(&Action::type_text("x")).unwrap();
        assert_eq!(e.kind, EventKind::NoEffect);
        assert_eq!(e.detail, NO_FOCUS_FOR_TYPE);
        assert!(env.values().is_empty());
        assert_eq!(env.observe().screenshot_digest, before);
    }

    #[test]
    fn checkbox_toggle_is_an_involution() {
        let mut env = session();
        click(&mut env, "check:langs:1");
        assert_eq!(env.extract_form_values()["langs"], "Go");
        click(&mut env, "check:langs:1");
        assert!(!env.extract_form_values().contains_key("langs"));
        click(&mut env, "check:agree");
        click(&mut env, "check:agree");
        assert!(env.values().is_empty());
    }

    #[test]
    fn dropdown_select_closes_overlay() {
        let mut env = session();
        click(&mut env, "head:stage");
        assert!(matches!(env.overlay(), Some(Overlay::Dropdown { .. })));
        let e = click(&mut env, "opt:stage:2");
        assert_eq!(e.kind, EventKind::OptionSelected);
        assert_eq!(env.extract_form_values()["stage"], "Growth");
        assert!(env.overlay().is_none());
    }

    #[test]
    fn radio_is_exclusive() {
        let mut env = session();
        click(&mut env, "radio:remote:0");
        click(&mut env, "radio:remote:1");
        assert_eq!(env.extract_form_values()["remote"], "No");
        let obs = env.observe();
        let layout = env.layout();
        let rs = env.render_state(&layout);
        assert!(rs.marked.contains("radio:remote:1") && !rs.marked.contains("radio:remote:0"));
        assert_eq!(obs.page_index, 0);
    }

    #[test]
    fn calendar_navigation_and_pick() {
        let mut env = session();
        click(&mut env, "input:founded");
        assert_eq!(
            env.overlay(),
            Some(&Overlay::Calendar {
                field_id: "founded".into(),
                year: 2024,
                month: 1
            })
        );
        for _ in 0..4 {
            click(&mut env, "cal:founded:nav:+1");
        }
        let e = click(&mut env, "cal:founded:day:1");
        assert_eq!(e.kind, EventKind::DateChosen);
        assert_eq!(env.extract_form_values()["founded"], "2024-05-01");
        assert!(env.overlay().is_none());
        // Reopening starts at the chosen month.
        click(&mut env, "input:founded");
        assert!(matches!(
            env.overlay(),
            Some(Overlay::Calendar {
                year: 2024,
                month: 5,
                ..
            })
        ));
    }

    #[test]
    fn typed_date_is_accepted() {
        let mut env = session();
        click(&mut env, "input:founded");
        env.step(&Action::type_text("2019-03-12")).unwrap();
        assert_eq!(env.extract_form_values()["founded"], "2019-03-12");
    }

    #[test]
    fn file_upload_flow() {
        let mut env = session();
        click(&mut env, "file:deck");
        assert_eq!(env.focused(), Some("filedialog:deck"));
        env.step(&Action::type_text("/home/ana/deck.pdf")).unwrap();
        assert!(!env.extract_form_values().contains_key("deck"));
        let e = click(&mut env, "file:deck");
        assert_eq!(e.kind, EventKind::FileRecorded);
        assert_eq!(env.extract_form_values()["deck"], "/home/ana/deck.pdf");
        assert!(env.overlay().is_none() && env.focused().is_none());
    }

    #[test]
    fn background_click_closes_and_unfocuses() {
        let mut env = session();
        click(&mut env, "head:stage");
        let e = env.step(&Action::click(1270, 500)).unwrap();
        assert_eq!(e.kind, EventKind::Focused);
        assert!(env.overlay().is_none());
        let e = env.step(&Action::click(1270, 500)).unwrap();
        assert_eq!(e.kind, EventKind::NoEffect);
    }

    #[test]
    fn double_click_clears_and_right_click_does_nothing() {
        let mut env = session();
        click(&mut env, "input:company");
        env.step(&Action::type_text("Wrong")).unwrap();
        let p = center(&env, "input:company");
        let e = env.step(&Action::DoubleClick { x: p.0, y: p.1 }).unwrap();
        assert_eq!(e.kind, EventKind::TextEntered);
        assert!(env.values().is_empty());
        let e = env.step(&Action::RightClick { x: p.0, y: p.1 }).unwrap();
        assert_eq!(e.kind, EventKind::NoEffect);
    }

    #[test]
    fn page_turn_and_submit_is_absorbing() {
        let mut env = session();
        click(&mut env, "input:company");
        let e = click(&mut env, "nav:next");
        assert_eq!(e.kind, EventKind::PageTurned);
        assert_eq!(env.observe().page_index, 1);
        assert!(env.focused().is_none());
        let e = click(&mut env, "nav:submit");
        assert_eq!(e.kind, EventKind::Submitted);
        assert_eq!(env.termination(), Some(Termination::Submitted));
        let steps = env.step_count();
        for action in [
            Action::click(0, 0),
            Action::type_text("x"),
            Action::RightClick { x: 1, y: 1 },
        ] {
            assert_eq!(env.step(&action), Err(EnvError::SessionTerminated));
        }
        assert_eq!(env.step_count(), steps);
    }

    #[test]
    fn step_cap_terminates() {
        let mut env = session().with_step_cap(3);
        for _ in 0..3 {
            env.step(&Action::RightClick { x: 0, y: 0 }).unwrap();
        }
        assert!(env.submitted());
        assert_eq!(env.termination(), Some(Termination::StepCap));
        assert_eq!(
            env.step(&Action::click(0, 0)),
            Err(EnvError::SessionTerminated)
        );
    }

    #[test]
    fn empty_type_rejected() {
        let mut env = session();
        assert!(matches!(
            env.step(&Action::type_text("")),
            Err(EnvError::InvalidAction(_))
        ));
        assert_eq!(env.step_count(), 0);
    }

    #[test]
    fn ruler_session_draws_bands() {
        let plain = session().observe();
        let ruled = create_session(
            schema(),
            sample("all"),
            Theme::plain(),
            Viewport::DEFAULT,
            true,
            7,
        )
        .unwrap()
        .observe();
        let diff = plain.screenshot().diff(ruled.screenshot());
        assert!(!diff.is_empty());
        assert!(diff.iter().all(|&(x, y)| x < 40 || y < 24));
    }

    #[test]
    fn catalog_sessions_start_everywhere() {
        for schema in builtin_catalog() {
            let schema = Arc::new(schema);
            let rec = sample(&schema.form_id);
            for theme in crate::render::builtin_themes() {
                create_session(
                    schema.clone(),
                    rec.clone(),
                    theme,
                    Viewport::DEFAULT,
                    true,
                    1,
                )
                .unwrap();
            }
        }
    }

    fn arb_action() -> impl Strategy<Value = Action> {
        prop_oneof![
            4 => (0..1280i32, 0..960i32).prop_map(|(x, y)| Action::Click { x, y }),
            1 => (0..1280i32, 0..960i32).prop_map(|(x, y)| Action::DoubleClick { x, y }),
            1 => (0..1280i32, 0..960i32).prop_map(|(x, y)| Action::RightClick { x, y }),
            2 => "[a-z0-9 -]{1,8}".prop_map(Action::type_text),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_action_streams_keep_invariants(actions in proptest::collection::vec(arb_action(), 1..60)) {
            let mut env = session();
            for action in &actions {
                let before = env.snapshot();
                match env.step(action) {
                    Ok(event) => {
                        let changed = env.snapshot() != before;
                        prop_assert_eq!(event.kind == EventKind::NoEffect, !changed);
                    }
                    Err(EnvError::SessionTerminated) => {
                        prop_assert!(env.submitted());
                        prop_assert!(env.snapshot() == before);
                    }
                    Err(e) => prop_assert!(false, "unexpected error {e}"),
                }
                let layout = env.layout();
                if let Some(f) = env.focused() {
                    prop_assert!(layout.widget(f).is_some(), "focus {} not in layout", f);
                }
                prop_assert!(env.render_state(&layout).marked.iter().all(|id| layout.widget(id).is_some()));
            }
        }
    }
}
