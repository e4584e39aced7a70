use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rgb(pub u8, pub u8, pub u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelPlacement {
    Left,
    Above,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub background: Rgb,
    pub text: Rgb,
    pub border: Rgb,
    pub accent: Rgb,
    /// Fill for input boxes and overlay panels.
    pub surface: Rgb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theme {
    pub theme_id: String,
    /// Integer magnification of the 8x8 glyph atlas.
    pub font_scale: u32,
    pub label_placement: LabelPlacement,
    pub spacing_px: u32,
    pub palette: Palette,
    pub corner_radius_px: u32,
}

#[derive(Debug, Error)]
pub enum ThemeError {
    #[error("malformed theme document: {0}")]
    Malformed(String),
    #[error("invalid theme `{0}`: {1}")]
    Invalid(String, String),
    #[error("unknown theme `{0}`")]
    Unknown(String),
}

impl Theme {
    pub fn glyph_size(&self) -> u32 {
        8 * self.font_scale
    }

    pub fn validate(&self) -> Result<(), ThemeError> {
        let bad = |msg: &str| Err(ThemeError::Invalid(self.theme_id.clone(), msg.to_string()));
        if self.theme_id.is_empty() {
            return bad("theme_id is empty");
        }
        if !(1..=4).contains(&self.font_scale) {
            return bad("font_scale must be 1..=4");
        }
        if self.spacing_px == 0 {
            return bad("spacing_px must be positive");
        }
        if self.corner_radius_px > 8 {
            return bad("corner_radius_px must be at most 8");
        }
        Ok(())
    }

    pub fn from_document(document: &str) -> Result<Theme, ThemeError> {
        let theme: Theme =
            toml::from_str(document).map_err(|e| ThemeError::Malformed(e.to_string()))?;
        theme.validate()?;
        Ok(theme)
    }

    pub fn to_document(&self) -> String {
        toml::to_string_pretty(self).expect("theme serializes")
    }

    pub fn plain() -> Theme {
        Theme {
            theme_id: "plain".into(),
            font_scale: 2,
            label_placement: LabelPlacement::Above,
            spacing_px: 12,
            palette: Palette {
                background: Rgb(246, 247, 249),
                text: Rgb(28, 30, 34),
                border: Rgb(150, 156, 166),
                accent: Rgb(37, 99, 235),
                surface: Rgb(255, 255, 255),
            },
            corner_radius_px: 3,
        }
    }

    pub fn compact() -> Theme {
        Theme {
            theme_id: "compact".into(),
            font_scale: 1,
            label_placement: LabelPlacement::Left,
            spacing_px: 8,
            palette: Palette {
                background: Rgb(255, 253, 245),
                text: Rgb(40, 32, 20),
                border: Rgb(120, 110, 90),
                accent: Rgb(180, 83, 9),
                surface: Rgb(255, 255, 255),
            },
            corner_radius_px: 0,
        }
    }

    pub fn dark() -> Theme {
        Theme {
            theme_id: "dark".into(),
            font_scale: 2,
            label_placement: LabelPlacement::Left,
            spacing_px: 10,
            palette: Palette {
                background: Rgb(24, 26, 31),
                text: Rgb(226, 230, 236),
                border: Rgb(96, 104, 118),
                accent: Rgb(52, 211, 153),
                surface: Rgb(40, 44, 52),
            },
            corner_radius_px: 4,
        }
    }
}

pub fn builtin_themes() -> Vec<Theme> {
    vec![Theme::plain(), Theme::compact(), Theme::dark()]
}

pub fn builtin_theme(theme_id: &str) -> Result<Theme, ThemeError> {
    builtin_themes()
        .into_iter()
        .find(|t| t.theme_id == theme_id)
        .ok_or_else(|| ThemeError::Unknown(theme_id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_themes_validate_and_round_trip() {
        for theme in builtin_themes() {
            theme.validate().unwrap();
            let doc = theme.to_document();
            assert_eq!(Theme::from_document(&doc).unwrap(), theme);
        }
    }

    #[test]
    fn zero_spacing_rejected() {
        let mut t = Theme::plain();
        t.spacing_px = 0;
        assert!(matches!(
            Theme::from_document(&t.to_document()),
            Err(ThemeError::Invalid(..))
        ));
    }

    #[test]
    fn unknown_theme() {
        assert!(builtin_theme("neon").is_err());
    }
}
