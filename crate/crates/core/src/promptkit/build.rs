use super::{ChatMessage, Exemplar, PromptError, PromptFormat, PromptSpec};
use crate::paradigm::{scan_tags, TagsetMapping};

/// Task description naming the paradigm's marker(s).
pub fn instruction(mapping: &TagsetMapping) -> String {
    let (s, p) = (mapping.marker_singular(), mapping.marker_plural());
    if s == p {
        format!(
            "Translate the following English sentence into Italian using the neomorpheme '{s}'. \
             To do so, the neomorpheme '{s}' should be used as a substitute for masculine and feminine \
             morphemes in words that refer to human beings."
        )
    } else {
        format!(
            "Translate the following English sentence into Italian using the neomorphemes '{s}' (singular) \
             and '{p}' (plural). To do so, the neomorphemes '{s}' and '{p}' should be used as substitutes \
             for masculine and feminine morphemes in words that refer to human beings."
        )
    }
}

fn wrap(text: &str) -> String {
    format!("<{}>", text.trim())
}

fn exemplar_answer(format: PromptFormat, ex: &Exemplar) -> String {
    let neo = wrap(&ex.ref_adapted);
    match format {
        PromptFormat::ZeroShot | PromptFormat::Direct => neo,
        PromptFormat::Binary => format!("{}\n[Italian, neomorpheme] {neo}", wrap(&ex.ref_masc)),
        PromptFormat::Ternary => format!(
            "{}\n[Italian, feminine] {}\n[Italian, neomorpheme] {neo}",
            wrap(&ex.ref_masc),
            wrap(&ex.ref_fem)
        ),
    }
}

/// Builds the chat messages for translating `source`.
///
/// Zero-shot prompts are a single user message: the instruction, then
/// `[English] <source>` and the `[Italian]` label. Few-shot prompts pair
/// each exemplar's `[English] <source>` + first stage label (user) with the
/// bracketed answer(s) (assistant), and end with a user message for
/// `source`. Outer whitespace of every sentence is trimmed before wrapping.
pub fn build_prompt(source: &str, spec: &PromptSpec, exemplars: &[Exemplar]) -> Result<Vec<ChatMessage>, PromptError> {
    spec.check()?;
    if exemplars.len() != spec.n_shots {
        return Err(PromptError::SpecMismatch {
            expected: spec.n_shots,
            found: exemplars.len(),
        });
    }
    if let Some(ex) = exemplars.iter().zip(&spec.exemplar_ids).find(|(ex, id)| ex.entry_id != **id) {
        return Err(PromptError::InvalidSpec(format!(
            "exemplar {} given where spec lists {}",
            ex.0.entry_id, ex.1
        )));
    }
    for ex in exemplars {
        if [&ex.source, &ex.ref_masc, &ex.ref_fem, &ex.ref_adapted]
            .iter()
            .any(|s| !scan_tags(s).is_empty())
        {
            return Err(PromptError::ResidualTag(ex.entry_id.clone()));
        }
    }

    let first_label = spec.format.stage_labels()[0];
    let query = |src: &str| format!("[English] {}\n{first_label}", wrap(src));

    if spec.format == PromptFormat::ZeroShot {
        return Ok(vec![ChatMessage::user(format!(
            "{}\n{}",
            instruction(&spec.paradigm),
            query(source)
        ))]);
    }

    let mut messages = Vec::with_capacity(2 * exemplars.len() + 1);
    for ex in exemplars {
        messages.push(ChatMessage::user(query(&ex.source)));
        messages.push(ChatMessage::assistant(exemplar_answer(spec.format, ex)));
    }
    messages.push(ChatMessage::user(query(source)));
    if spec.instruction_in_few_shot {
        let first = &mut messages[0].content;
        *first = format!("{}\n{first}", instruction(&spec.paradigm));
    }
    Ok(messages)
}
