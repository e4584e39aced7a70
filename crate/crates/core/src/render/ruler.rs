//! Pixel rulers composited along the top and left screenshot edges.

use super::geometry::Rect;
use super::layout::{RULER_LEFT_PX, RULER_TOP_PX};
use super::raster::{draw_text, Bitmap};
use super::theme::Rgb;

pub const MINOR_TICK_LEN: u32 = 6;
pub const MAJOR_TICK_LEN: u32 = 10;

const BAND: Rgb = Rgb(232, 232, 226);
const INK: Rgb = Rgb(20, 20, 20);

/// Tick positions along one axis of `extent` pixels.
pub fn tick_positions(extent: u32, minor_px: u32) -> Vec<u32> {
    (0..extent).step_by(minor_px as usize).collect()
}

/// Returns a copy of `bitmap` with rulers drawn in the top and left bands.
/// Ticks sit at every multiple of `minor_px`; multiples of `major_px` get a
/// longer tick and a decimal label. Pixels outside the bands are untouched.
///
/// Panics if `minor_px` is zero or does not divide `major_px`.
pub fn overlay_ruler(bitmap: &Bitmap, minor_px: u32, major_px: u32) -> Bitmap {
    assert!(
        minor_px > 0 && major_px % minor_px == 0,
        "minor tick spacing must divide major spacing"
    );
    let mut out = bitmap.clone();
    let (w, h) = (bitmap.width(), bitmap.height());
    let top_band = Rect::new(0, 0, w, RULER_TOP_PX.min(h));
    let left_band = Rect::new(0, 0, RULER_LEFT_PX.min(w), h);
    out.fill_rect(top_band, BAND);
    out.fill_rect(left_band, BAND);
    // Band edges.
    out.fill_rect(Rect::new(0, top_band.bottom() - 1, w, 1), INK);
    out.fill_rect(Rect::new(left_band.right() - 1, 0, 1, h), INK);

    for x in tick_positions(w, minor_px) {
        let major = x % major_px == 0;
        let len = if major {
            MAJOR_TICK_LEN
        } else {
            MINOR_TICK_LEN
        };
        out.fill_rect(
            Rect::new(x as i32, top_band.bottom() - len as i32, 1, len),
            INK,
        );
        if major {
            draw_text(&mut out, &x.to_string(), x as i32 + 2, 2, 1, INK, top_band);
        }
    }
    for y in tick_positions(h, minor_px) {
        let major = y % major_px == 0;
        let len = if major {
            MAJOR_TICK_LEN
        } else {
            MINOR_TICK_LEN
        };
        out.fill_rect(
            Rect::new(left_band.right() - len as i32, y as i32, len, 1),
            INK,
        );
        if major {
            draw_text(&mut out, &y.to_string(), 1, y as i32 + 2, 1, INK, left_band);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Bitmap {
        Bitmap::new(1280, 960, Rgb(255, 255, 255))
    }

    #[test]
    fn horizontal_ticks_every_fifty_pixels() {
        let ticks = tick_positions(1280, 50);
        assert_eq!(ticks.len(), 26);
        assert_eq!(ticks.first(), Some(&0));
        assert_eq!(ticks.last(), Some(&1250));
        let ruled = overlay_ruler(&base(), 50, 100);
        let tick_row = RULER_TOP_PX - 2;
        for x in ticks {
            if x >= RULER_LEFT_PX {
                assert_eq!(ruled.pixel(x, tick_row), INK, "tick at {x}");
                assert_eq!(ruled.pixel(x + 1, tick_row), BAND, "gap after {x}");
            }
        }
    }

    #[test]
    fn nothing_changes_outside_the_bands() {
        let mut img = base();
        img.fill_rect(Rect::new(100, 100, 300, 200), Rgb(1, 2, 3));
        let ruled = overlay_ruler(&img, 50, 100);
        for (x, y) in img.diff(&ruled) {
            assert!(y < RULER_TOP_PX || x < RULER_LEFT_PX, "({x}, {y}) changed");
        }
    }

    #[test]
    fn major_labels_show_the_coordinate() {
        let ruled = overlay_ruler(&base(), 50, 100);
        for x in (100..=1200).step_by(100) {
            let label = x.to_string();
            let mut expected = Bitmap::new(1280, 960, BAND);
            let region = Rect::new(x as i32 + 2, 2, 8 * label.len() as u32, 8);
            draw_text(
                &mut expected,
                &label,
                region.left,
                region.top,
                1,
                INK,
                region,
            );
            for py in 2..10u32 {
                for px in region.left as u32..region.right() as u32 {
                    assert_eq!(
                        ruled.pixel(px, py),
                        expected.pixel(px, py),
                        "label {label} at ({px},{py})"
                    );
                }
            }
        }
    }

    #[test]
    #[should_panic]
    fn minor_must_divide_major() {
        overlay_ruler(&base(), 30, 100);
    }
}
