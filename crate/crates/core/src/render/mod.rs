//! Page layout, rasterization, ruler overlay and hit-testing.

pub mod geometry;
pub mod layout;
pub mod raster;
pub mod ruler;
pub mod theme;

pub use geometry::{Rect, Viewport};
pub use layout::{compute_layout, hit_test, LayoutError, LayoutTree, Overlay, Widget, WidgetKind};
pub use raster::{render, Bitmap, RenderError, RenderState};
pub use ruler::overlay_ruler;
pub use theme::{builtin_theme, builtin_themes, Theme};

/// Default ruler spacing.
pub const RULER_MINOR_PX: u32 = 50;
pub const RULER_MAJOR_PX: u32 = 100;
