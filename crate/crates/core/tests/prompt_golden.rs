mod common;

use neogate_core::promptkit::{
    build_prompt, bracketed_spans, dump_messages, select_exemplars, PromptFormat, PromptSpec, Role,
};
use neogate_core::TagsetMapping;

const QUERY: &str = "The department chair said they might hire new professors";

fn golden(name: &str) -> String {
    std::fs::read_to_string(common::fixture(&format!("golden/{name}.json"))).unwrap()
}

fn spec(format: PromptFormat) -> PromptSpec {
    match format {
        PromptFormat::ZeroShot => PromptSpec::zero_shot(TagsetMapping::asterisk()),
        f => PromptSpec::new(f, TagsetMapping::asterisk(), vec!["d1".into()]).unwrap(),
    }
}

fn build(format: PromptFormat) -> Vec<neogate_core::promptkit::ChatMessage> {
    let s = spec(format);
    let exemplars = select_exemplars(&common::dev_sample(), &s.exemplar_ids, &s.paradigm).unwrap();
    build_prompt(QUERY, &s, &exemplars).unwrap()
}

#[test]
fn prompts_match_golden_files() {
    for (format, name) in [
        (PromptFormat::ZeroShot, "zero_shot"),
        (PromptFormat::Direct, "direct_1shot"),
        (PromptFormat::Binary, "binary_1shot"),
        (PromptFormat::Ternary, "ternary_1shot"),
    ] {
        assert_eq!(dump_messages(&build(format)), golden(name), "{name}");
    }
}

#[test]
fn exemplar_answers_carry_one_span_per_stage() {
    for (format, spans) in [(PromptFormat::Direct, 1), (PromptFormat::Binary, 2), (PromptFormat::Ternary, 3)] {
        let m = build(format);
        assert_eq!(m.iter().map(|m| m.role).collect::<Vec<_>>(), [Role::User, Role::Assistant, Role::User]);
        assert_eq!(bracketed_spans(&m[1].content).len(), spans);
    }
}

#[test]
fn deterministic() {
    for format in [PromptFormat::ZeroShot, PromptFormat::Direct, PromptFormat::Binary, PromptFormat::Ternary] {
        assert_eq!(build(format), build(format));
    }
}
