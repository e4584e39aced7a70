use sha2::{Digest, Sha256};

use super::dsl::render_actions;
use crate::env::{Action, Observation};
use crate::render::{RULER_MAJOR_PX, RULER_MINOR_PX};

pub const AGENT_PROMPT_TEMPLATE: &str = include_str!("../../assets/agent_prompt_v1.txt");
pub const AGENT_PROMPT_VERSION: &str = "agent_prompt_v1";

pub const GRAMMAR_BLOCK: &str = "\
CLICK(x, y)
DOUBLECLICK(x, y)
RIGHTCLICK(x, y)
TYPE(\"text, with \\\" and \\\\ escaped\")
# a line starting with # is a comment
";

pub fn ruler_sentence() -> String {
    format!(
        "Pixel rulers run along the top and left edges of the screenshot, labelled every {RULER_MAJOR_PX} \
         pixels with a tick every {RULER_MINOR_PX}. Read each x coordinate off the top ruler and each y \
         coordinate off the left ruler before you click.\n"
    )
}

/// The single format example shown to the model. Synthetic: it belongs to
/// no catalog form.
pub fn few_shot_example() -> String {
    let mut out = String::from("# Name field, then the country drop-down\n");
    out.push_str(&render_actions(&[
        Action::click(310, 142),
        Action::type_text("Jamie Example"),
        Action::click(310, 226),
        Action::click(298, 262),
        Action::click(640, 880),
    ]));
    out
}

pub fn prompt_template_hash() -> String {
    hex::encode(Sha256::digest(AGENT_PROMPT_TEMPLATE.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prompt {
    pub text: String,
    pub image_png: Vec<u8>,
    pub screenshot_digest: String,
}

impl Prompt {
    /// Identifies the request: the text plus the screenshot it came with.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.text.as_bytes());
        h.update([0]);
        h.update(self.screenshot_digest.as_bytes());
        hex::encode(h.finalize())
    }
}

pub fn prompt_text(context_document: &str, observation: &Observation, ruler_hint: bool) -> String {
    let page = observation.page_index + 1;
    AGENT_PROMPT_TEMPLATE
        .replace("{width}", &observation.viewport.width.to_string())
        .replace("{height}", &observation.viewport.height.to_string())
        .replace("{page_number}", &page.to_string())
        .replace("{page_count}", &observation.page_count.to_string())
        .replace(
            "{pages_remaining}",
            &observation.page_count.saturating_sub(page).to_string(),
        )
        .replace("{grammar}", GRAMMAR_BLOCK)
        .replace(
            "{ruler}",
            &if ruler_hint {
                ruler_sentence()
            } else {
                String::new()
            },
        )
        .replace("{example}", &few_shot_example())
        .replace("{context}", context_document.trim_end())
}

/// Prompt text plus the observation's screenshot as PNG.
pub fn build_prompt(context_document: &str, observation: &Observation, ruler_hint: bool) -> Prompt {
    Prompt {
        text: prompt_text(context_document, observation, ruler_hint),
        image_png: observation.screenshot().to_png(),
        screenshot_digest: observation.screenshot_digest.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::dsl::parse_actions;
    use crate::render::theme::Rgb;
    use crate::render::{Bitmap, Viewport};

    fn obs(page: usize, count: usize) -> Observation {
        let bmp = Bitmap::new(640, 480, Rgb(255, 255, 255));
        Observation {
            screenshot_digest: bmp.digest(),
            screenshot: Some(bmp),
            page_index: page,
            page_count: count,
            viewport: Viewport::new(640, 480),
            step_count: 0,
        }
    }

    #[test]
    fn ruler_sentence_only_when_asked() {
        let without = prompt_text("ctx", &obs(0, 1), false);
        let with = prompt_text("ctx", &obs(0, 1), true);
        assert!(without.contains(GRAMMAR_BLOCK));
        assert!(!without.contains("rulers run"));
        assert!(with.contains(&ruler_sentence()));
    }

    #[test]
    fn counters_and_context() {
        let t = prompt_text("My name is Jo.", &obs(1, 3), false);
        assert!(t.contains("page 2 of 3 (1 after this one)"));
        assert!(t.contains("My name is Jo."));
        assert!(t.contains("640x480"));
        assert!(!t.contains('{'), "unfilled placeholder in:\n{t}");
    }

    #[test]
    fn deterministic() {
        let a = build_prompt("c", &obs(0, 2), true);
        let b = build_prompt("c", &obs(0, 2), true);
        assert_eq!(a, b);
        assert_eq!(a.digest(), b.digest());
        assert!(a.image_png.starts_with(b"\x89PNG"));
    }

    #[test]
    fn example_parses_cleanly() {
        let seq = parse_actions(&few_shot_example());
        assert_eq!(seq.actions.len(), 5);
        assert!(seq.diagnostics.is_empty());
        assert_eq!(parse_actions(GRAMMAR_BLOCK).diagnostics.len(), 3);
    }
}
