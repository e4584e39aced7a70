//! Deterministic widget geometry for one form page.
//!
//! The layout walk stacks fields top to bottom in schema order starting below
//! the ruler margins, places the navigation button at the bottom edge, and
//! appends the widgets of an open overlay (dropdown list, calendar, file
//! dialog) last so they sit on top of everything else.

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::geometry::{Rect, Viewport};
use super::theme::{LabelPlacement, Theme};
use crate::schema::{FieldSpec, FieldType, FormSchema};

/// Height of the band reserved for the horizontal ruler.
pub const RULER_TOP_PX: u32 = 24;
/// Width of the band reserved for the vertical ruler.
pub const RULER_LEFT_PX: u32 = 40;
/// Gap between the ruler bands and the first content pixel.
pub const CONTENT_MARGIN_PX: u32 = 16;

/// Month a calendar opens on when its field holds no parseable date.
pub const DEFAULT_CALENDAR_MONTH: (i32, u32) = (2024, 1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WidgetKind {
    TextBox,
    TextArea,
    DropdownHead,
    DropdownOption,
    CheckboxSquare,
    RadioDot,
    DateBox,
    CalendarCell,
    CalendarNav,
    NumericBox,
    FileButton,
    FileDialogBox,
    NextButton,
    SubmitButton,
    Label,
    RulerTick,
}

impl WidgetKind {
    pub fn is_interactive(self) -> bool {
        !matches!(self, WidgetKind::Label | WidgetKind::RulerTick)
    }

    /// Widgets that take focus and accept `Type`.
    pub fn is_text_like(self) -> bool {
        matches!(
            self,
            WidgetKind::TextBox
                | WidgetKind::TextArea
                | WidgetKind::NumericBox
                | WidgetKind::DateBox
                | WidgetKind::FileDialogBox
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Widget {
    pub widget_id: String,
    pub owner_field_id: Option<String>,
    pub kind: WidgetKind,
    pub bounds: Rect,
    /// Option text, day number, month delta, or label text.
    pub payload: Option<String>,
    pub option_index: Option<usize>,
}

impl Widget {
    pub fn is_interactive(&self) -> bool {
        self.kind.is_interactive()
    }

    pub fn owned_by(&self, field_id: &str) -> bool {
        self.owner_field_id.as_deref() == Some(field_id)
    }
}

/// Transient UI state that changes geometry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Overlay {
    Dropdown {
        field_id: String,
    },
    Calendar {
        field_id: String,
        year: i32,
        month: u32,
    },
    FileDialog {
        field_id: String,
    },
}

impl Overlay {
    pub fn field_id(&self) -> &str {
        match self {
            Overlay::Dropdown { field_id }
            | Overlay::Calendar { field_id, .. }
            | Overlay::FileDialog { field_id } => field_id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutTree {
    pub viewport: Viewport,
    pub page_index: usize,
    pub widgets: Vec<Widget>,
    /// Panel behind the overlay widgets; clicks on it reach nothing below.
    pub overlay_region: Option<Rect>,
    /// Index of the first overlay widget (`widgets.len()` when closed).
    pub overlay_start: usize,
}

impl LayoutTree {
    pub fn widget(&self, widget_id: &str) -> Option<&Widget> {
        self.widgets.iter().find(|w| w.widget_id == widget_id)
    }

    pub fn base_widgets(&self) -> &[Widget] {
        &self.widgets[..self.overlay_start]
    }

    pub fn overlay_widgets(&self) -> &[Widget] {
        &self.widgets[self.overlay_start..]
    }

    pub fn interactive(&self) -> impl Iterator<Item = &Widget> {
        self.widgets.iter().filter(|w| w.is_interactive())
    }

    pub fn navigation(&self) -> &Widget {
        self.widgets
            .iter()
            .find(|w| matches!(w.kind, WidgetKind::NextButton | WidgetKind::SubmitButton))
            .expect("every layout has a navigation widget")
    }

    pub fn field_widgets<'a>(&'a self, field_id: &'a str) -> impl Iterator<Item = &'a Widget> + 'a {
        self.widgets.iter().filter(move |w| w.owned_by(field_id))
    }

    /// Topmost interactive widget containing the point.
    pub fn hit_test(&self, x: i32, y: i32) -> Option<&Widget> {
        hit_test(self, x, y)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LayoutError {
    #[error("page {page} out of range for a form with {page_count} page(s)")]
    PageOutOfRange { page: usize, page_count: usize },
    #[error("viewport {viewport} is below the 640x480 minimum")]
    ViewportBelowMinimum { viewport: Viewport },
    #[error("page {page} needs {needed_height}px of height but viewport {viewport} is too small")]
    ViewportTooSmall {
        viewport: Viewport,
        page: usize,
        needed_height: u32,
    },
    #[error("overlay refers to field `{0}` which is not on this page or has the wrong type")]
    BadOverlay(String),
}

/// Pixel measures derived from a theme.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Metrics {
    pub glyph: u32,
    pub pad: u32,
    pub input_h: u32,
    pub line_h: u32,
    pub spacing: u32,
}

impl Metrics {
    pub fn new(theme: &Theme) -> Metrics {
        let glyph = theme.glyph_size();
        let pad = 2 + 2 * theme.font_scale;
        Metrics {
            glyph,
            pad,
            input_h: glyph + 2 * pad,
            line_h: glyph + 4,
            spacing: theme.spacing_px,
        }
    }

    pub fn text_width(&self, text: &str) -> u32 {
        text.chars().count() as u32 * self.glyph
    }

    pub fn square(&self) -> u32 {
        self.glyph + 8
    }

    pub fn textarea_h(&self) -> u32 {
        4 * self.line_h + 2 * self.pad
    }
}

pub const TEXTAREA_LINES: u32 = 4;

struct Walk<'a> {
    m: Metrics,
    theme: &'a Theme,
    viewport: Viewport,
    content_left: i32,
    content_right: i32,
    widgets: Vec<Widget>,
}

impl<'a> Walk<'a> {
    fn push(
        &mut self,
        widget_id: String,
        owner: Option<&str>,
        kind: WidgetKind,
        bounds: Rect,
        payload: Option<String>,
        option_index: Option<usize>,
    ) {
        self.widgets.push(Widget {
            widget_id,
            owner_field_id: owner.map(str::to_string),
            kind,
            bounds,
            payload,
            option_index,
        });
    }

    fn label(
        &mut self,
        widget_id: String,
        owner: Option<&str>,
        text: &str,
        left: i32,
        top: i32,
        max_w: u32,
    ) {
        let width = self.m.text_width(text).min(max_w).max(1);
        let bounds = Rect::new(left, top, width, self.m.glyph);
        self.push(
            widget_id,
            owner,
            WidgetKind::Label,
            bounds,
            Some(text.to_string()),
            None,
        );
    }

    /// Lays out one field starting at `top`; returns the bottom edge.
    fn field(&mut self, field: &FieldSpec, top: i32) -> i32 {
        let m = self.m;
        let content_w = (self.content_right - self.content_left) as u32;
        let label_text = if field.required {
            format!("{} *", field.label)
        } else {
            field.label.clone()
        };
        let fid = field.field_id.as_str();

        let (input_left, input_top, input_w_max) = match self.theme.label_placement {
            LabelPlacement::Above => {
                self.label(
                    format!("label:{fid}"),
                    Some(fid),
                    &label_text,
                    self.content_left,
                    top,
                    content_w,
                );
                (self.content_left, top + (m.glyph + 4) as i32, content_w)
            }
            LabelPlacement::Left => {
                let column = (content_w * 2 / 5).min(34 * m.glyph);
                let label_top = top + ((m.input_h - m.glyph) / 2) as i32;
                self.label(
                    format!("label:{fid}"),
                    Some(fid),
                    &label_text,
                    self.content_left,
                    label_top,
                    column - m.glyph,
                );
                (self.content_left + column as i32, top, content_w - column)
            }
        };

        let wide = input_w_max.min(36 * m.glyph + 2 * m.pad);
        let narrow = input_w_max.min(14 * m.glyph + 2 * m.pad);
        let input_id = format!("input:{fid}");
        let bottom = match field.field_type {
            FieldType::StringInput => {
                let r = Rect::new(input_left, input_top, wide, m.input_h);
                self.push(input_id, Some(fid), WidgetKind::TextBox, r, None, None);
                r.bottom()
            }
            FieldType::Description => {
                let r = Rect::new(input_left, input_top, wide, m.textarea_h());
                self.push(input_id, Some(fid), WidgetKind::TextArea, r, None, None);
                r.bottom()
            }
            FieldType::NumericInput => {
                let r = Rect::new(input_left, input_top, narrow, m.input_h);
                self.push(input_id, Some(fid), WidgetKind::NumericBox, r, None, None);
                r.bottom()
            }
            FieldType::Date => {
                let r = Rect::new(input_left, input_top, narrow, m.input_h);
                self.push(input_id, Some(fid), WidgetKind::DateBox, r, None, None);
                r.bottom()
            }
            FieldType::Dropdown => {
                let r = Rect::new(
                    input_left,
                    input_top,
                    input_w_max.min(28 * m.glyph + 2 * m.pad),
                    m.input_h,
                );
                self.push(
                    format!("head:{fid}"),
                    Some(fid),
                    WidgetKind::DropdownHead,
                    r,
                    None,
                    None,
                );
                r.bottom()
            }
            FieldType::FileUpload => {
                let r = Rect::new(input_left, input_top, wide, m.input_h);
                self.push(
                    format!("file:{fid}"),
                    Some(fid),
                    WidgetKind::FileButton,
                    r,
                    None,
                    None,
                );
                r.bottom()
            }
            FieldType::CheckboxInput => {
                let sq = m.square();
                let r = Rect::new(input_left, input_top, sq, sq);
                self.push(
                    format!("check:{fid}"),
                    Some(fid),
                    WidgetKind::CheckboxSquare,
                    r,
                    None,
                    None,
                );
                r.bottom()
            }
            FieldType::BinaryChoice | FieldType::MultipleChoice => {
                let kind = if field.field_type == FieldType::BinaryChoice {
                    WidgetKind::RadioDot
                } else {
                    WidgetKind::CheckboxSquare
                };
                let prefix = if kind == WidgetKind::RadioDot {
                    "radio"
                } else {
                    "check"
                };
                let sq = m.square();
                let right = input_left + input_w_max as i32;
                let (mut x, mut y) = (input_left, input_top);
                for (i, option) in field.options.iter().enumerate() {
                    let text_w = m.text_width(option);
                    let item_w = (sq + 6 + text_w) as i32;
                    if x > input_left && x + item_w > right {
                        x = input_left;
                        y += (sq + 6) as i32;
                    }
                    let square = Rect::new(x, y, sq, sq);
                    self.push(
                        format!("{prefix}:{fid}:{i}"),
                        Some(fid),
                        kind,
                        square,
                        Some(option.clone()),
                        Some(i),
                    );
                    let label_top = y + ((sq - m.glyph) / 2) as i32;
                    let label_left = x + sq as i32 + 6;
                    let max_w = (right - label_left).max(1) as u32;
                    self.label(
                        format!("optlabel:{fid}:{i}"),
                        Some(fid),
                        option,
                        label_left,
                        label_top,
                        max_w,
                    );
                    x += item_w + (2 * m.glyph) as i32;
                }
                y + sq as i32
            }
        };

        let label_bottom = match self.theme.label_placement {
            LabelPlacement::Above => bottom,
            LabelPlacement::Left => bottom.max(top + m.input_h as i32),
        };
        label_bottom
    }

    fn place_panel(&self, anchor: Rect, width: u32, height: u32) -> Rect {
        let vw = self.viewport.width as i32;
        let vh = self.viewport.height as i32;
        let min_top = RULER_TOP_PX as i32;
        let mut top = anchor.bottom() + 2;
        if top + height as i32 > vh - 2 {
            top = anchor.top - 2 - height as i32;
        }
        if top < min_top {
            top = (vh - 2 - height as i32).max(min_top);
        }
        let mut left = anchor.left;
        if left + width as i32 > vw - 2 {
            left = (vw - 2 - width as i32).max(RULER_LEFT_PX as i32);
        }
        Rect::new(left, top, width, height)
    }

    fn overlay(
        &mut self,
        schema: &FormSchema,
        page_index: usize,
        overlay: &Overlay,
    ) -> Result<Rect, LayoutError> {
        let fid = overlay.field_id();
        let field = schema
            .field(fid)
            .filter(|f| f.page_index == page_index)
            .ok_or_else(|| LayoutError::BadOverlay(fid.to_string()))?;
        let anchor = self
            .widgets
            .iter()
            .find(|w| w.owned_by(fid) && w.is_interactive())
            .map(|w| w.bounds)
            .ok_or_else(|| LayoutError::BadOverlay(fid.to_string()))?;
        let m = self.m;

        match overlay {
            Overlay::Dropdown { .. } => {
                if field.field_type != FieldType::Dropdown {
                    return Err(LayoutError::BadOverlay(fid.to_string()));
                }
                let height = m.input_h * field.options.len() as u32;
                let panel = self.place_panel(anchor, anchor.width, height);
                for (i, option) in field.options.iter().enumerate() {
                    let r = Rect::new(
                        panel.left,
                        panel.top + (i as u32 * m.input_h) as i32,
                        panel.width,
                        m.input_h,
                    );
                    self.push(
                        format!("opt:{fid}:{i}"),
                        Some(fid),
                        WidgetKind::DropdownOption,
                        r,
                        Some(option.clone()),
                        Some(i),
                    );
                }
                Ok(panel)
            }
            Overlay::FileDialog { .. } => {
                if field.field_type != FieldType::FileUpload {
                    return Err(LayoutError::BadOverlay(fid.to_string()));
                }
                let caption = "File path (click the button again to upload):";
                let width = anchor.width.max(m.text_width(caption) + 2 * m.pad);
                let height = m.glyph + m.input_h + 3 * m.pad;
                let panel = self.place_panel(anchor, width, height);
                let cap_top = panel.top + m.pad as i32;
                self.label(
                    format!("filecaption:{fid}"),
                    Some(fid),
                    caption,
                    panel.left + m.pad as i32,
                    cap_top,
                    width - 2 * m.pad,
                );
                let r = Rect::new(
                    panel.left + m.pad as i32,
                    cap_top + (m.glyph + m.pad) as i32,
                    width - 2 * m.pad,
                    m.input_h,
                );
                self.push(
                    format!("filedialog:{fid}"),
                    Some(fid),
                    WidgetKind::FileDialogBox,
                    r,
                    None,
                    None,
                );
                Ok(panel)
            }
            Overlay::Calendar { year, month, .. } => {
                if field.field_type != FieldType::Date {
                    return Err(LayoutError::BadOverlay(fid.to_string()));
                }
                let first = NaiveDate::from_ymd_opt(*year, *month, 1)
                    .ok_or_else(|| LayoutError::BadOverlay(fid.to_string()))?;
                let cell_w = 3 * m.glyph + 8;
                let cell_h = m.glyph + 10;
                let width = 7 * cell_w;
                let height = m.pad + m.input_h + m.pad + m.glyph + m.pad + 6 * cell_h + m.pad;
                let panel = self.place_panel(anchor, width, height);

                let nav_top = panel.top + m.pad as i32;
                let navs: [(&str, i32, i32); 4] = [
                    ("<<", -12, panel.left),
                    ("<", -1, panel.left + cell_w as i32),
                    (">", 1, panel.right() - 2 * cell_w as i32),
                    (">>", 12, panel.right() - cell_w as i32),
                ];
                for (text, delta, left) in navs {
                    let r = Rect::new(left + 2, nav_top, cell_w - 4, m.input_h);
                    self.push(
                        format!("cal:{fid}:nav:{delta:+}"),
                        Some(fid),
                        WidgetKind::CalendarNav,
                        r,
                        Some(text.to_string()),
                        None,
                    );
                }
                let title = format!("{year:04}-{month:02}");
                let title_w = m.text_width(&title);
                let title_left = panel.left + ((width - title_w) / 2) as i32;
                self.label(
                    format!("cal:{fid}:title"),
                    Some(fid),
                    &title,
                    title_left,
                    nav_top + m.pad as i32,
                    title_w,
                );

                let head_top = nav_top + (m.input_h + m.pad) as i32;
                for (col, name) in ["Mo", "Tu", "We", "Th", "Fr", "Sa", "Su"]
                    .iter()
                    .enumerate()
                {
                    let left =
                        panel.left + (col as u32 * cell_w + (cell_w - 2 * m.glyph) / 2) as i32;
                    self.label(
                        format!("cal:{fid}:wd:{col}"),
                        Some(fid),
                        name,
                        left,
                        head_top,
                        2 * m.glyph,
                    );
                }

                let grid_top = head_top + (m.glyph + m.pad) as i32;
                let offset = first.weekday().num_days_from_monday();
                let days = days_in_month(*year, *month);
                for day in 1..=days {
                    let slot = offset + day - 1;
                    let (row, col) = (slot / 7, slot % 7);
                    let r = Rect::new(
                        panel.left + (col * cell_w) as i32 + 1,
                        grid_top + (row * cell_h) as i32 + 1,
                        cell_w - 2,
                        cell_h - 2,
                    );
                    self.push(
                        format!("cal:{fid}:day:{day}"),
                        Some(fid),
                        WidgetKind::CalendarCell,
                        r,
                        Some(day.to_string()),
                        None,
                    );
                }
                Ok(panel)
            }
        }
    }
}

pub fn days_in_month(year: i32, month: u32) -> u32 {
    let (ny, nm) = if month == 12 {
        (year + 1, 1)
    } else {
        (year, month + 1)
    };
    let next = NaiveDate::from_ymd_opt(ny, nm, 1).expect("valid month");
    let this = NaiveDate::from_ymd_opt(year, month, 1).expect("valid month");
    (next - this).num_days() as u32
}

/// Shifts a (year, month) pair by `delta` months.
pub fn shift_month(year: i32, month: u32, delta: i32) -> (i32, u32) {
    let index = year * 12 + (month as i32 - 1) + delta;
    (index.div_euclid(12), (index.rem_euclid(12) + 1) as u32)
}

/// Computes the widget geometry of one page.
pub fn compute_layout(
    schema: &FormSchema,
    theme: &Theme,
    viewport: Viewport,
    page_index: usize,
    overlay: Option<&Overlay>,
) -> Result<LayoutTree, LayoutError> {
    if page_index >= schema.page_count {
        return Err(LayoutError::PageOutOfRange {
            page: page_index,
            page_count: schema.page_count,
        });
    }
    if !viewport.admits_minimum() {
        return Err(LayoutError::ViewportBelowMinimum { viewport });
    }

    let m = Metrics::new(theme);
    let content_left = (RULER_LEFT_PX + CONTENT_MARGIN_PX) as i32;
    let content_top = (RULER_TOP_PX + CONTENT_MARGIN_PX) as i32;
    let content_right = viewport.width as i32 - CONTENT_MARGIN_PX as i32;
    let mut walk = Walk {
        m,
        theme,
        viewport,
        content_left,
        content_right,
        widgets: Vec::new(),
    };

    let title = if schema.page_count > 1 {
        format!(
            "{} - Page {} of {}",
            schema.name,
            page_index + 1,
            schema.page_count
        )
    } else {
        schema.name.clone()
    };
    walk.label(
        "title".to_string(),
        None,
        &title,
        content_left,
        content_top,
        (content_right - content_left) as u32,
    );

    let mut y = content_top + (m.glyph + 2 * m.spacing) as i32;
    for field in schema.fields_on_page(page_index) {
        let bottom = walk.field(field, y);
        y = bottom + m.spacing as i32;
    }

    let last_page = page_index + 1 == schema.page_count;
    let (kind, id, text) = if last_page {
        (WidgetKind::SubmitButton, "nav:submit", "Submit")
    } else {
        (WidgetKind::NextButton, "nav:next", "Next")
    };
    let nav_h = m.input_h;
    let nav_top = viewport.height as i32 - CONTENT_MARGIN_PX as i32 - nav_h as i32;
    if y > nav_top {
        let needed = (y - nav_top) as u32 + viewport.height;
        return Err(LayoutError::ViewportTooSmall {
            viewport,
            page: page_index,
            needed_height: needed,
        });
    }
    let nav_w = 10 * m.glyph + 2 * m.pad;
    walk.push(
        id.to_string(),
        None,
        kind,
        Rect::new(content_left, nav_top, nav_w, nav_h),
        Some(text.to_string()),
        None,
    );

    let overlay_start = walk.widgets.len();
    let overlay_region = match overlay {
        Some(o) => Some(walk.overlay(schema, page_index, o)?),
        None => None,
    };

    Ok(LayoutTree {
        viewport,
        page_index,
        widgets: walk.widgets,
        overlay_region,
        overlay_start,
    })
}

/// Topmost interactive widget containing `(x, y)`. Overlay widgets win over
/// the base layout, and the overlay panel swallows points between them.
pub fn hit_test(layout: &LayoutTree, x: i32, y: i32) -> Option<&Widget> {
    if let Some(hit) = layout
        .overlay_widgets()
        .iter()
        .rev()
        .find(|w| w.is_interactive() && w.bounds.contains(x, y))
    {
        return Some(hit);
    }
    if layout.overlay_region.is_some_and(|r| r.contains(x, y)) {
        return None;
    }
    layout
        .base_widgets()
        .iter()
        .rev()
        .find(|w| w.is_interactive() && w.bounds.contains(x, y))
}

/// Checks the structural invariants of a layout; returns one message per
/// violation.
pub fn check_layout(layout: &LayoutTree) -> Vec<String> {
    let mut problems = Vec::new();
    for w in &layout.widgets {
        if w.bounds.width == 0 || w.bounds.height == 0 {
            problems.push(format!("{} has an empty box", w.widget_id));
        }
        if !w.bounds.inside(layout.viewport) {
            problems.push(format!("{} leaves the viewport", w.widget_id));
        }
        let field_owned = !matches!(
            w.kind,
            WidgetKind::Label
                | WidgetKind::RulerTick
                | WidgetKind::NextButton
                | WidgetKind::SubmitButton
        );
        if field_owned && w.owner_field_id.is_none() {
            problems.push(format!("{} has no owner field", w.widget_id));
        }
    }
    let navs = layout
        .widgets
        .iter()
        .filter(|w| matches!(w.kind, WidgetKind::NextButton | WidgetKind::SubmitButton))
        .count();
    if navs != 1 {
        problems.push(format!("{navs} navigation widgets"));
    }
    for group in [layout.base_widgets(), layout.overlay_widgets()] {
        let interactive: Vec<_> = group.iter().filter(|w| w.is_interactive()).collect();
        for (i, a) in interactive.iter().enumerate() {
            for b in &interactive[i + 1..] {
                if a.bounds.intersects(&b.bounds) {
                    problems.push(format!("{} overlaps {}", a.widget_id, b.widget_id));
                }
            }
        }
    }
    let mut ids: Vec<_> = layout
        .widgets
        .iter()
        .map(|w| w.widget_id.as_str())
        .collect();
    ids.sort_unstable();
    if ids.windows(2).any(|w| w[0] == w[1]) {
        problems.push("duplicate widget ids".to_string());
    }
    problems
}
