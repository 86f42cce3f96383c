use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::PromptFormat;

const NEOMORPHEME_LABEL: &str = "[Italian, neomorpheme]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtractionOutcome {
    Ok,
    Unparseable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub outcome: ExtractionOutcome,
    pub translation: Option<String>,
    pub raw: String,
}

/// Byte ranges of the contents of `<...>` spans. A `<` reopens the span, so
/// the innermost bracket pair wins.
pub fn bracketed_spans(text: &str) -> Vec<Range<usize>> {
    let mut spans = Vec::new();
    let mut open = None;
    for (i, c) in text.char_indices() {
        match c {
            '<' => open = Some(i + 1),
            '>' => {
                if let Some(start) = open.take() {
                    spans.push(start..i);
                }
            }
            _ => {}
        }
    }
    spans
}

fn find_ascii_ci(haystack: &str, needle: &str) -> Option<usize> {
    let (h, n) = (haystack.as_bytes(), needle.as_bytes());
    if n.len() > h.len() {
        return None;
    }
    (0..=h.len() - n.len()).find(|&i| h[i..i + n.len()].eq_ignore_ascii_case(n))
}

/// Pulls the final translation out of a raw completion.
///
/// Binary and ternary outputs take the first span after the
/// `[Italian, neomorpheme]` label (case-insensitive); zero-shot and direct
/// outputs take the first span. If that finds nothing, the last span
/// anywhere is used. Without any non-empty span the output is unparseable.
pub fn extract_translation(raw: &str, format: PromptFormat) -> ExtractionResult {
    let spans = bracketed_spans(raw);
    let primary = match format {
        PromptFormat::Binary | PromptFormat::Ternary => find_ascii_ci(raw, NEOMORPHEME_LABEL).and_then(|at| {
            let after = at + NEOMORPHEME_LABEL.len();
            spans.iter().find(|s| s.start > after)
        }),
        PromptFormat::ZeroShot | PromptFormat::Direct => spans.first(),
    };
    let chosen = primary.or(spans.last()).map(|s| raw[s.clone()].trim()).filter(|t| !t.is_empty());
    match chosen {
        Some(t) => ExtractionResult {
            outcome: ExtractionOutcome::Ok,
            translation: Some(t.to_string()),
            raw: raw.to_string(),
        },
        None => ExtractionResult {
            outcome: ExtractionOutcome::Unparseable,
            translation: None,
            raw: raw.to_string(),
        },
    }
}
