//! Chat prompts for neomorpheme translation and extraction of the final
//! translation from model output.

mod build;
mod exemplars;
mod extract;

pub use build::{build_prompt, instruction};
pub use exemplars::{rank_exemplar_candidates, select_exemplars, Exemplar};
pub use extract::{bracketed_spans, extract_translation, ExtractionOutcome, ExtractionResult};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::paradigm::{ParadigmError, TagsetMapping};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptFormat {
    ZeroShot,
    Direct,
    Binary,
    Ternary,
}

impl PromptFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            PromptFormat::ZeroShot => "zero_shot",
            PromptFormat::Direct => "direct",
            PromptFormat::Binary => "binary",
            PromptFormat::Ternary => "ternary",
        }
    }

    /// Labels that introduce each Italian output, in order. The last one
    /// introduces the neomorpheme translation.
    pub fn stage_labels(self) -> &'static [&'static str] {
        match self {
            PromptFormat::ZeroShot | PromptFormat::Direct => &["[Italian]"],
            PromptFormat::Binary => &["[Italian, gendered]", "[Italian, neomorpheme]"],
            PromptFormat::Ternary => &["[Italian, masculine]", "[Italian, feminine]", "[Italian, neomorpheme]"],
        }
    }
}

impl fmt::Display for PromptFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PromptFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "zero_shot" | "zeroshot" | "zero" => Ok(PromptFormat::ZeroShot),
            "direct" => Ok(PromptFormat::Direct),
            "binary" => Ok(PromptFormat::Binary),
            "ternary" => Ok(PromptFormat::Ternary),
            other => Err(format!("unknown prompt format {other:?}")),
        }
    }
}

/// Shot counts a prompt may use.
pub const ALLOWED_SHOTS: [usize; 4] = [0, 1, 4, 8];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSpec {
    pub format: PromptFormat,
    pub n_shots: usize,
    pub paradigm: TagsetMapping,
    pub exemplar_ids: Vec<String>,
    /// Prepend the task instruction to the first user message of few-shot
    /// prompts. Zero-shot prompts always carry it.
    pub instruction_in_few_shot: bool,
}

impl PromptSpec {
    pub fn new(format: PromptFormat, paradigm: TagsetMapping, exemplar_ids: Vec<String>) -> Result<Self, PromptError> {
        let spec = PromptSpec {
            format,
            n_shots: exemplar_ids.len(),
            paradigm,
            exemplar_ids,
            instruction_in_few_shot: false,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn zero_shot(paradigm: TagsetMapping) -> Self {
        PromptSpec {
            format: PromptFormat::ZeroShot,
            n_shots: 0,
            paradigm,
            exemplar_ids: Vec::new(),
            instruction_in_few_shot: false,
        }
    }

    pub fn check(&self) -> Result<(), PromptError> {
        let bad = |m: String| Err(PromptError::InvalidSpec(m));
        if self.n_shots != self.exemplar_ids.len() {
            return bad(format!("n_shots={} but {} exemplar ids", self.n_shots, self.exemplar_ids.len()));
        }
        if !ALLOWED_SHOTS.contains(&self.n_shots) {
            return bad(format!("n_shots must be one of {ALLOWED_SHOTS:?}, got {}", self.n_shots));
        }
        if (self.format == PromptFormat::ZeroShot) != (self.n_shots == 0) {
            return bad(format!("{} prompts cannot use {} shots", self.format, self.n_shots));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

/// Prompt dump: a pretty-printed JSON array of `{"role", "content"}`.
pub fn dump_messages(messages: &[ChatMessage]) -> String {
    serde_json::to_string_pretty(messages).expect("messages serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("invalid prompt spec: {0}")]
    InvalidSpec(String),
    #[error("spec expects {expected} exemplars, got {found}")]
    SpecMismatch { expected: usize, found: usize },
    #[error("exemplar {0} not found in the dev corpus")]
    UnknownExemplar(String),
    #[error("exemplar {0} still contains placeholder tags")]
    ResidualTag(String),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error(transparent)]
    Paradigm(#[from] ParadigmError),
}
