//! Software rasterizer for laid-out pages.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::geometry::{Rect, Viewport};
use super::layout::{LayoutTree, Metrics, Widget, WidgetKind};
use super::theme::{Rgb, Theme};

/// Row-major opaque RGB image.
#[derive(Clone, PartialEq, Eq)]
pub struct Bitmap {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for Bitmap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Bitmap({}x{}, {})",
            self.width,
            self.height,
            &self.digest()[..12]
        )
    }
}

impl Bitmap {
    pub fn new(width: u32, height: u32, fill: Rgb) -> Bitmap {
        assert!(
            width > 0 && height > 0,
            "bitmap dimensions must be positive"
        );
        let mut pixels = Vec::with_capacity((width * height * 3) as usize);
        for _ in 0..width * height {
            pixels.extend_from_slice(&[fill.0, fill.1, fill.2]);
        }
        Bitmap {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn viewport(&self) -> Viewport {
        Viewport::new(self.width, self.height)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixel(&self, x: u32, y: u32) -> Rgb {
        let i = ((y * self.width + x) * 3) as usize;
        Rgb(self.pixels[i], self.pixels[i + 1], self.pixels[i + 2])
    }

    pub fn set(&mut self, x: i32, y: i32, c: Rgb) {
        if x < 0 || y < 0 || x >= self.width as i32 || y >= self.height as i32 {
            return;
        }
        let i = ((y as u32 * self.width + x as u32) * 3) as usize;
        self.pixels[i] = c.0;
        self.pixels[i + 1] = c.1;
        self.pixels[i + 2] = c.2;
    }

    pub fn fill_rect(&mut self, r: Rect, c: Rgb) {
        let x0 = r.left.max(0);
        let x1 = r.right().min(self.width as i32);
        let y0 = r.top.max(0);
        let y1 = r.bottom().min(self.height as i32);
        if x0 >= x1 {
            return;
        }
        for y in y0..y1 {
            let start = ((y as u32 * self.width + x0 as u32) * 3) as usize;
            let end = ((y as u32 * self.width + x1 as u32) * 3) as usize;
            for px in self.pixels[start..end].chunks_exact_mut(3) {
                px.copy_from_slice(&[c.0, c.1, c.2]);
            }
        }
    }

    /// Hex SHA-256 over the dimensions and pixel bytes.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.width.to_le_bytes());
        hasher.update(self.height.to_le_bytes());
        hasher.update(&self.pixels);
        hex::encode(hasher.finalize())
    }

    /// 8-bit RGB PNG without alpha.
    pub fn to_png(&self) -> Vec<u8> {
        let mut out = Vec::new();
        {
            let mut encoder = png::Encoder::new(&mut out, self.width, self.height);
            encoder.set_color(png::ColorType::Rgb);
            encoder.set_depth(png::BitDepth::Eight);
            encoder.set_compression(png::Compression::Fast);
            let mut writer = encoder.write_header().expect("png header into a Vec");
            writer
                .write_image_data(&self.pixels)
                .expect("png data into a Vec");
        }
        out
    }

    pub fn from_png(bytes: &[u8]) -> Result<Bitmap, RenderError> {
        let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
        let mut reader = decoder
            .read_info()
            .map_err(|e| RenderError::Png(e.to_string()))?;
        let size = reader
            .output_buffer_size()
            .ok_or_else(|| RenderError::Png("image too large".into()))?;
        let mut buf = vec![0; size];
        let info = reader
            .next_frame(&mut buf)
            .map_err(|e| RenderError::Png(e.to_string()))?;
        if info.color_type != png::ColorType::Rgb || info.bit_depth != png::BitDepth::Eight {
            return Err(RenderError::Png(format!(
                "expected RGB8, got {:?}",
                info.color_type
            )));
        }
        buf.truncate(info.buffer_size());
        Ok(Bitmap {
            width: info.width,
            height: info.height,
            pixels: buf,
        })
    }

    /// Coordinates of pixels that differ between two equally sized bitmaps.
    pub fn diff(&self, other: &Bitmap) -> Vec<(u32, u32)> {
        assert_eq!((self.width, self.height), (other.width, other.height));
        let mut out = Vec::new();
        for (i, (a, b)) in self
            .pixels
            .chunks_exact(3)
            .zip(other.pixels.chunks_exact(3))
            .enumerate()
        {
            if a != b {
                out.push((i as u32 % self.width, i as u32 / self.width));
            }
        }
        out
    }
}

/// Widget-level visual state, keyed by widget id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderState {
    pub focused: Option<String>,
    /// Display text for boxes, heads and buttons.
    pub texts: BTreeMap<String, String>,
    /// Checked boxes, selected radio dots, chosen calendar day, selected option.
    pub marked: BTreeSet<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("render state refers to unknown widget `{0}`")]
    InconsistentState(String),
    #[error("png error: {0}")]
    Png(String),
}

/// Draws `text` with the embedded 8x8 atlas, clipped to `clip`.
pub fn draw_text(
    bmp: &mut Bitmap,
    text: &str,
    left: i32,
    top: i32,
    scale: u32,
    color: Rgb,
    clip: Rect,
) {
    let s = scale as i32;
    let mut x = left;
    for ch in text.chars() {
        let code = ch as usize;
        let glyph = if code < 128 {
            font8x8::legacy::BASIC_LEGACY[code]
        } else {
            font8x8::legacy::BASIC_LEGACY[b'?' as usize]
        };
        for (row, bits) in glyph.iter().enumerate() {
            for col in 0..8 {
                if bits & (1 << col) == 0 {
                    continue;
                }
                for dy in 0..s {
                    for dx in 0..s {
                        let px = x + col * s + dx;
                        let py = top + row as i32 * s + dy;
                        if clip.contains(px, py) {
                            bmp.set(px, py, color);
                        }
                    }
                }
            }
        }
        x += 8 * s;
        if x >= clip.right() {
            break;
        }
    }
}

fn rounded_fill(bmp: &mut Bitmap, r: Rect, radius: u32, c: Rgb) {
    let rad = radius.min(r.width / 2).min(r.height / 2) as i32;
    if rad == 0 {
        bmp.fill_rect(r, c);
        return;
    }
    for y in r.top..r.bottom() {
        for x in r.left..r.right() {
            if in_rounded(r, rad, x, y) {
                bmp.set(x, y, c);
            }
        }
    }
}

fn in_rounded(r: Rect, rad: i32, x: i32, y: i32) -> bool {
    let cx = if x < r.left + rad {
        r.left + rad
    } else if x >= r.right() - rad {
        r.right() - rad - 1
    } else {
        return true;
    };
    let cy = if y < r.top + rad {
        r.top + rad
    } else if y >= r.bottom() - rad {
        r.bottom() - rad - 1
    } else {
        return true;
    };
    let (dx, dy) = (x - cx, y - cy);
    dx * dx + dy * dy <= rad * rad
}

/// Filled box with a border of `thickness` pixels, all inside `r`.
fn framed(bmp: &mut Bitmap, r: Rect, radius: u32, border: Rgb, fill: Rgb, thickness: u32) {
    rounded_fill(bmp, r, radius, border);
    rounded_fill(
        bmp,
        r.inset(thickness),
        radius.saturating_sub(thickness),
        fill,
    );
}

fn filled_circle(bmp: &mut Bitmap, r: Rect, inset: i32, c: Rgb) {
    // Doubled coordinates keep the center exact for even sizes.
    let cx2 = 2 * r.left + r.width as i32 - 1;
    let cy2 = 2 * r.top + r.height as i32 - 1;
    let rad2 = r.width.min(r.height) as i32 - 2 * inset;
    if rad2 <= 0 {
        return;
    }
    for y in r.top..r.bottom() {
        for x in r.left..r.right() {
            let (dx, dy) = (2 * x - cx2, 2 * y - cy2);
            if dx * dx + dy * dy <= rad2 * rad2 {
                bmp.set(x, y, c);
            }
        }
    }
}

fn tail_that_fits(text: &str, max_chars: usize) -> &str {
    let n = text.chars().count();
    if n <= max_chars {
        return text;
    }
    let skip = n - max_chars;
    let idx = text
        .char_indices()
        .nth(skip)
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    &text[idx..]
}

fn wrap(text: &str, cols: usize) -> Vec<String> {
    let cols = cols.max(1);
    let mut lines = Vec::new();
    let mut line = String::new();
    for word in text.split_whitespace() {
        let mut word = word.to_string();
        while word.chars().count() > cols {
            if !line.is_empty() {
                lines.push(std::mem::take(&mut line));
            }
            let head: String = word.chars().take(cols).collect();
            word = word.chars().skip(cols).collect();
            lines.push(head);
        }
        let needed = if line.is_empty() {
            word.chars().count()
        } else {
            line.chars().count() + 1 + word.chars().count()
        };
        if needed > cols {
            lines.push(std::mem::take(&mut line));
        }
        if !line.is_empty() {
            line.push(' ');
        }
        line.push_str(&word);
    }
    if !line.is_empty() {
        lines.push(line);
    }
    lines
}

struct Painter<'a> {
    bmp: Bitmap,
    theme: &'a Theme,
    m: Metrics,
    state: &'a RenderState,
}

impl Painter<'_> {
    fn text_line(&mut self, r: Rect, text: &str, color: Rgb) {
        let m = self.m;
        let clip = r.inset(m.pad.min(r.width / 2).min(r.height / 2));
        let cols = (clip.width / m.glyph) as usize;
        let shown = tail_that_fits(text, cols);
        let top = r.top + ((r.height.saturating_sub(m.glyph)) / 2) as i32;
        draw_text(
            &mut self.bmp,
            shown,
            clip.left,
            top,
            self.theme.font_scale,
            color,
            clip,
        );
    }

    fn centered(&mut self, r: Rect, text: &str, color: Rgb) {
        let m = self.m;
        let w = m.text_width(text).min(r.width);
        let left = r.left + ((r.width - w) / 2) as i32;
        let top = r.top + ((r.height.saturating_sub(m.glyph)) / 2) as i32;
        draw_text(
            &mut self.bmp,
            text,
            left,
            top,
            self.theme.font_scale,
            color,
            r,
        );
    }

    fn widget(&mut self, w: &Widget) {
        let p = self.theme.palette.clone();
        let radius = self.theme.corner_radius_px;
        let r = w.bounds;
        let focused = self.state.focused.as_deref() == Some(w.widget_id.as_str());
        let marked = self.state.marked.contains(&w.widget_id);
        let text = self.state.texts.get(&w.widget_id).cloned();
        let border = if focused { p.accent } else { p.border };
        let thickness = if focused { 2 } else { 1 };

        match w.kind {
            WidgetKind::Label => {
                let payload = w.payload.as_deref().unwrap_or("");
                draw_text(
                    &mut self.bmp,
                    payload,
                    r.left,
                    r.top,
                    self.theme.font_scale,
                    p.text,
                    r,
                );
            }
            WidgetKind::RulerTick => self.bmp.fill_rect(r, p.text),
            WidgetKind::TextBox | WidgetKind::NumericBox | WidgetKind::FileDialogBox => {
                framed(&mut self.bmp, r, radius, border, p.surface, thickness);
                if let Some(t) = text {
                    self.text_line(r, &t, p.text);
                }
            }
            WidgetKind::DateBox => {
                framed(&mut self.bmp, r, radius, border, p.surface, thickness);
                match text {
                    Some(t) => self.text_line(r, &t, p.text),
                    None => self.text_line(r, "YYYY-MM-DD", p.border),
                }
            }
            WidgetKind::TextArea => {
                framed(&mut self.bmp, r, radius, border, p.surface, thickness);
                if let Some(t) = text {
                    let m = self.m;
                    let clip = r.inset(m.pad);
                    let cols = (clip.width / m.glyph) as usize;
                    let rows = (clip.height / m.line_h).max(1) as usize;
                    let lines = wrap(&t, cols);
                    let visible = &lines[lines.len().saturating_sub(rows)..];
                    for (i, line) in visible.iter().enumerate() {
                        let top = clip.top + (i as u32 * m.line_h) as i32;
                        draw_text(
                            &mut self.bmp,
                            line,
                            clip.left,
                            top,
                            self.theme.font_scale,
                            p.text,
                            clip,
                        );
                    }
                }
            }
            WidgetKind::DropdownHead => {
                framed(&mut self.bmp, r, radius, border, p.surface, thickness);
                let m = self.m;
                let arrow_w = m.glyph + 2 * m.pad;
                let body = Rect::new(r.left, r.top, r.width.saturating_sub(arrow_w), r.height);
                match text {
                    Some(t) => self.text_line(body, &t, p.text),
                    None => self.text_line(body, "Select...", p.border),
                }
                let arrow = Rect::new(r.right() - arrow_w as i32, r.top, arrow_w, r.height);
                self.centered(arrow.inset(1), "v", p.accent);
            }
            WidgetKind::DropdownOption => {
                let fill = if marked { p.accent } else { p.surface };
                let fg = if marked { p.surface } else { p.text };
                framed(&mut self.bmp, r, 0, p.border, fill, 1);
                let label = w.payload.clone().unwrap_or_default();
                self.text_line(r, &label, fg);
            }
            WidgetKind::CheckboxSquare => {
                framed(&mut self.bmp, r, radius.min(2), p.border, p.surface, 1);
                if marked {
                    self.bmp.fill_rect(r.inset(4), p.accent);
                }
            }
            WidgetKind::RadioDot => {
                filled_circle(&mut self.bmp, r, 0, p.border);
                filled_circle(&mut self.bmp, r, 1, p.surface);
                if marked {
                    filled_circle(&mut self.bmp, r, 4, p.accent);
                }
            }
            WidgetKind::CalendarNav => {
                framed(&mut self.bmp, r, radius, p.border, p.surface, 1);
                let label = w.payload.clone().unwrap_or_default();
                self.centered(r.inset(1), &label, p.text);
            }
            WidgetKind::CalendarCell => {
                let (fill, fg) = if marked {
                    (p.accent, p.surface)
                } else {
                    (p.surface, p.text)
                };
                framed(&mut self.bmp, r, 0, p.border, fill, 1);
                let label = w.payload.clone().unwrap_or_default();
                self.centered(r.inset(1), &label, fg);
            }
            WidgetKind::FileButton => {
                framed(&mut self.bmp, r, radius, p.accent, p.surface, thickness);
                match text {
                    Some(t) => self.text_line(r, &t, p.text),
                    None => self.text_line(r, "Choose file...", p.accent),
                }
            }
            WidgetKind::NextButton | WidgetKind::SubmitButton => {
                framed(&mut self.bmp, r, radius, p.accent, p.accent, 1);
                let label = w.payload.clone().unwrap_or_default();
                self.centered(r.inset(1), &label, p.surface);
            }
        }
    }
}

/// Rasterizes a layout with its widget state. Pure: identical inputs give
/// identical bytes.
pub fn render(
    layout: &LayoutTree,
    state: &RenderState,
    theme: &Theme,
) -> Result<Bitmap, RenderError> {
    let known = |id: &str| layout.widgets.iter().any(|w| w.widget_id == id);
    let referenced = state
        .focused
        .iter()
        .chain(state.texts.keys())
        .chain(state.marked.iter());
    for id in referenced {
        if !known(id) {
            return Err(RenderError::InconsistentState(id.clone()));
        }
    }

    let vp = layout.viewport;
    let mut painter = Painter {
        bmp: Bitmap::new(vp.width, vp.height, theme.palette.background),
        theme,
        m: Metrics::new(theme),
        state,
    };
    for (i, w) in layout.widgets.iter().enumerate() {
        if i == layout.overlay_start {
            if let Some(region) = layout.overlay_region {
                framed(
                    &mut painter.bmp,
                    region,
                    0,
                    theme.palette.border,
                    theme.palette.surface,
                    1,
                );
            }
        }
        painter.widget(w);
    }
    Ok(painter.bmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::layout::compute_layout;
    use crate::schema::{DomainCategory, FieldSpec, FieldType, FormSchema};

    fn schema() -> FormSchema {
        FormSchema {
            form_id: "r".into(),
            name: "Render".into(),
            domain_category: DomainCategory::TechnologySoftware,
            page_count: 1,
            theme_id: "plain".into(),
            fields: vec![
                FieldSpec::new("company", "Company", FieldType::StringInput),
                FieldSpec::new("agree", "Agree", FieldType::CheckboxInput),
                FieldSpec::new("notes", "Notes", FieldType::Description),
            ],
        }
    }

    fn boxes_except_labels(layout: &LayoutTree) -> Vec<Rect> {
        layout.interactive().map(|w| w.bounds).collect()
    }

    #[test]
    fn rendering_is_pure() {
        let theme = Theme::plain();
        let layout = compute_layout(&schema(), &theme, Viewport::DEFAULT, 0, None).unwrap();
        let mut state = RenderState::default();
        state.texts.insert("input:company".into(), "Acme".into());
        let a = render(&layout, &state, &theme).unwrap();
        let b = render(&layout, &state, &theme).unwrap();
        assert_eq!(a.as_bytes(), b.as_bytes());
    }

    #[test]
    fn checkbox_change_is_confined_to_its_box() {
        for theme in crate::render::theme::builtin_themes() {
            let layout = compute_layout(&schema(), &theme, Viewport::DEFAULT, 0, None).unwrap();
            let unchecked = render(&layout, &RenderState::default(), &theme).unwrap();
            let mut state = RenderState::default();
            state.marked.insert("check:agree".into());
            let checked = render(&layout, &state, &theme).unwrap();
            let square = layout.widget("check:agree").unwrap().bounds;
            let diff = unchecked.diff(&checked);
            assert!(!diff.is_empty());
            assert!(diff
                .iter()
                .all(|&(x, y)| square.contains(x as i32, y as i32)));
            let boxes = boxes_except_labels(&layout);
            assert!(diff
                .iter()
                .all(|&(x, y)| boxes.iter().any(|b| b.contains(x as i32, y as i32))));
        }
    }

    #[test]
    fn typed_text_is_confined_to_its_text_box() {
        let theme = Theme::dark();
        let layout = compute_layout(&schema(), &theme, Viewport::DEFAULT, 0, None).unwrap();
        let empty = render(&layout, &RenderState::default(), &theme).unwrap();
        let mut state = RenderState::default();
        state.texts.insert("input:company".into(), "Acme".into());
        let typed = render(&layout, &state, &theme).unwrap();
        let r = layout.widget("input:company").unwrap().bounds;
        let diff = empty.diff(&typed);
        assert!(!diff.is_empty());
        assert!(diff.iter().all(|&(x, y)| r.contains(x as i32, y as i32)));
    }

    #[test]
    fn focus_highlight_is_visible() {
        let theme = Theme::plain();
        let layout = compute_layout(&schema(), &theme, Viewport::DEFAULT, 0, None).unwrap();
        let plain = render(&layout, &RenderState::default(), &theme).unwrap();
        let state = RenderState {
            focused: Some("input:notes".into()),
            ..Default::default()
        };
        let focused = render(&layout, &state, &theme).unwrap();
        assert_ne!(plain.digest(), focused.digest());
    }

    #[test]
    fn unknown_widget_is_inconsistent() {
        let theme = Theme::plain();
        let layout = compute_layout(&schema(), &theme, Viewport::DEFAULT, 0, None).unwrap();
        let mut state = RenderState::default();
        state.marked.insert("check:nope".into());
        assert_eq!(
            render(&layout, &state, &theme).unwrap_err(),
            RenderError::InconsistentState("check:nope".into())
        );
    }

    #[test]
    fn png_round_trip_keeps_pixels() {
        let theme = Theme::compact();
        let layout = compute_layout(&schema(), &theme, Viewport::new(640, 480), 0, None).unwrap();
        let bmp = render(&layout, &RenderState::default(), &theme).unwrap();
        let png = bmp.to_png();
        assert_eq!(&png[1..4], b"PNG");
        let back = Bitmap::from_png(&png).unwrap();
        assert_eq!(back, bmp);
        assert_eq!(bmp.to_png(), png);
    }

    #[test]
    fn wrapping_respects_columns() {
        let lines = wrap("the quick brown fox jumps over the lazy dog", 10);
        assert!(lines.iter().all(|l| l.chars().count() <= 10));
        assert_eq!(
            lines.join(" "),
            "the quick brown fox jumps over the lazy dog"
        );
        assert_eq!(wrap("abcdefghijkl", 5), vec!["abcde", "fghij", "kl"]);
    }
}
