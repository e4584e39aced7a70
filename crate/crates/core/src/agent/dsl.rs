//! The line-oriented action language models answer in:
//!
//! ```text
//! CLICK(<int>, <int>)
//! DOUBLECLICK(<int>, <int>)
//! RIGHTCLICK(<int>, <int>)
//! TYPE("<escaped string>")
//! # comment
//! ```
//!
//! Parsing is total: lines that do not fit are reported as diagnostics and
//! skipped. Code fences and list markers (`1.`, `2)`, `-`, `*`) are ignored,
//! and keywords match case-insensitively.

use serde::{Deserialize, Serialize};

use crate::env::Action;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSequence {
    pub actions: Vec<Action>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl ActionSequence {
    pub fn new(actions: Vec<Action>) -> ActionSequence {
        ActionSequence {
            actions,
            diagnostics: Vec::new(),
        }
    }
}

fn strip_list_marker(line: &str) -> &str {
    if let Some(rest) = line.strip_prefix("- ").or_else(|| line.strip_prefix("* ")) {
        return rest.trim_start();
    }
    let digits = line.bytes().take_while(u8::is_ascii_digit).count();
    if digits > 0 {
        let rest = &line[digits..];
        if let Some(r) = rest.strip_prefix('.').or_else(|| rest.strip_prefix(')')) {
            return r.trim_start();
        }
    }
    line
}

fn parse_int(s: &str) -> Result<i32, String> {
    let t = s.trim();
    t.parse::<i32>()
        .map_err(|_| format!("coordinate `{t}` is not an integer literal"))
}

fn parse_point(args: &str) -> Result<(i32, i32), String> {
    let mut parts = args.split(',');
    let (Some(x), Some(y), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!("expected two coordinates, got `{args}`"));
    };
    Ok((parse_int(x)?, parse_int(y)?))
}

/// Decodes `"..."` (the whole of `s`) with backslash escapes.
fn parse_quoted(s: &str) -> Result<String, String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('"')
        .and_then(|r| r.strip_suffix('"'))
        .filter(|_| s.len() >= 2)
        .ok_or_else(|| "TYPE payload must be a double-quoted string".to_string())?;
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some('r') => out.push('\r'),
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some(other) => return Err(format!("unknown escape `\\{other}`")),
                None => return Err("dangling backslash".into()),
            },
            '"' => return Err("unescaped quote inside TYPE payload".into()),
            c => out.push(c),
        }
    }
    Ok(out)
}

fn parse_line(line: &str) -> Result<Action, String> {
    let open = line.find('(').ok_or_else(|| "not an action".to_string())?;
    let keyword = line[..open].trim().to_ascii_uppercase();
    let rest = &line[open + 1..];
    let close = rest
        .rfind(')')
        .ok_or_else(|| "missing closing parenthesis".to_string())?;
    if !rest[close + 1..].trim().is_empty() {
        return Err("trailing text after action".into());
    }
    let args = &rest[..close];
    match keyword.as_str() {
        "CLICK" => parse_point(args).map(|(x, y)| Action::Click { x, y }),
        "DOUBLECLICK" => parse_point(args).map(|(x, y)| Action::DoubleClick { x, y }),
        "RIGHTCLICK" => parse_point(args).map(|(x, y)| Action::RightClick { x, y }),
        "TYPE" => parse_quoted(args).map(|text| Action::Type { text }),
        _ => Err(format!("unknown action `{}`", line[..open].trim())),
    }
}

pub fn parse_actions(model_text: &str) -> ActionSequence {
    let mut seq = ActionSequence::default();
    for (i, raw) in model_text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("```") || line.starts_with('#') {
            continue;
        }
        let line = strip_list_marker(line);
        match parse_line(line) {
            Ok(action) => seq.actions.push(action),
            Err(message) => seq.diagnostics.push(Diagnostic {
                line: i + 1,
                message,
            }),
        }
    }
    seq
}

pub fn escape_payload(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

pub fn render_action(action: &Action) -> String {
    match action {
        Action::Click { x, y } => format!("CLICK({x}, {y})"),
        Action::DoubleClick { x, y } => format!("DOUBLECLICK({x}, {y})"),
        Action::RightClick { x, y } => format!("RIGHTCLICK({x}, {y})"),
        Action::Type { text } => format!("TYPE(\"{}\")", escape_payload(text)),
    }
}

/// One action per line, newline-terminated.
pub fn render_actions(actions: &[Action]) -> String {
    actions.iter().map(|a| render_action(a) + "\n").collect()
}

/// Texts a session's fields could hold from these actions: each `TYPE`
/// payload, plus each run of consecutive payloads concatenated (typing
/// appends, so a run lands in one field).
pub fn typed_texts(actions: &[Action]) -> Vec<String> {
    let mut out = Vec::new();
    let mut run: Vec<&str> = Vec::new();
    let flush = |run: &mut Vec<&str>, out: &mut Vec<String>| {
        if run.len() > 1 {
            out.push(run.concat());
        }
        run.clear();
    };
    for action in actions {
        match action {
            Action::Type { text } => {
                out.push(text.clone());
                run.push(text);
            }
            _ => flush(&mut run, &mut out),
        }
    }
    flush(&mut run, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grammar_cases() {
        let seq = parse_actions("CLICK(412, 305)\nTYPE(\"Jane Doe\")");
        assert_eq!(
            seq.actions,
            vec![Action::click(412, 305), Action::type_text("Jane Doe")]
        );
        assert!(seq.diagnostics.is_empty());
    }

    #[test]
    fn fences_and_markers() {
        let seq = parse_actions("Sure:\n```\n1. click(10,20)\n```\n");
        assert_eq!(seq.actions, vec![Action::click(10, 20)]);
        // The prose line is the one diagnostic.
        assert_eq!(seq.diagnostics.len(), 1);
        assert_eq!(seq.diagnostics[0].line, 1);
        let seq = parse_actions(
            "```text\n- DoubleClick( 1 , 2 )\n2) RIGHTCLICK(3,4)\n* type(\"x\")\n```",
        );
        assert_eq!(
            seq.actions,
            vec![
                Action::DoubleClick { x: 1, y: 2 },
                Action::RightClick { x: 3, y: 4 },
                Action::type_text("x")
            ]
        );
        assert!(seq.diagnostics.is_empty());
    }

    #[test]
    fn malformed_lines_become_diagnostics() {
        let seq = parse_actions("CLICK(a, b)");
        assert!(seq.actions.is_empty());
        assert_eq!(seq.diagnostics.len(), 1);
        for bad in [
            "CLICK(1.5, 2)",
            "CLICK(1)",
            "CLICK(1,2,3)",
            "TYPE(Jane)",
            "TYPE(\"a\"b\")",
            "TYPE(\"bad \\q\")",
            "SCROLL(1, 2)",
            "CLICK(1, 2) now",
        ] {
            let seq = parse_actions(bad);
            assert!(seq.actions.is_empty(), "{bad}");
            assert_eq!(seq.diagnostics.len(), 1, "{bad}");
        }
    }

    #[test]
    fn comments_are_skipped() {
        let seq = parse_actions("# choose Yes\nCLICK(1, 1)\n   # trailing");
        assert_eq!(seq.actions.len(), 1);
        assert!(seq.diagnostics.is_empty());
    }

    #[test]
    fn escapes_round_trip() {
        let a = Action::type_text("say \"hi\"\\\n\tback");
        let text = render_actions(std::slice::from_ref(&a));
        assert_eq!(text, "TYPE(\"say \\\"hi\\\"\\\\\\n\\tback\")\n");
        assert_eq!(parse_actions(&text).actions, vec![a]);
    }

    #[test]
    fn typed_text_runs() {
        let actions = vec![
            Action::click(1, 1),
            Action::type_text("Ber"),
            Action::type_text("lin"),
            Action::click(2, 2),
            Action::type_text("x"),
        ];
        assert_eq!(typed_texts(&actions), vec!["Ber", "lin", "Berlin", "x"]);
    }

    fn arb_action() -> impl Strategy<Value = Action> {
        prop_oneof![
            (any::<i32>(), any::<i32>()).prop_map(|(x, y)| Action::Click { x, y }),
            (any::<i32>(), any::<i32>()).prop_map(|(x, y)| Action::DoubleClick { x, y }),
            (any::<i32>(), any::<i32>()).prop_map(|(x, y)| Action::RightClick { x, y }),
            "\\PC{1,30}".prop_map(Action::type_text),
            "[ -~\n\t\"\\\\]{1,30}".prop_map(Action::type_text),
        ]
    }

    proptest! {
        #[test]
        fn emit_then_parse_is_identity(actions in prop::collection::vec(arb_action(), 0..20)) {
            let seq = parse_actions(&render_actions(&actions));
            prop_assert!(seq.diagnostics.is_empty());
            prop_assert_eq!(seq.actions, actions);
        }

        #[test]
        fn parser_is_total(text in "\\PC{0,200}") {
            let _ = parse_actions(&text);
        }
    }
}
