//! Word-level scoring of hypotheses against adapted annotations.

mod matcher;
mod metrics;
mod tokenize;

pub use matcher::{match_entry, score_entry, EntryEval, Outcome, TripletResult};
pub use metrics::{aggregate, compute_metrics, Counters, EvalCounts, MetricReport, Percent, Ratio};
pub use tokenize::{count_neomorphemes, tokenize, tokenize_keeping, Token};

use thiserror::Error;

use crate::exec::Execution;
use crate::paradigm::{AdaptedEntry, TagsetMapping};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no annotations to score")]
    NoAnnotations,
    #[error("hypothesis file has {found} lines, corpus has {expected} entries")]
    HypothesisCount { expected: usize, found: usize },
}

/// Splits a hypothesis file into one optional translation per line.
/// Blank lines mark unparseable entries.
pub fn parse_hypotheses(text: &str) -> Vec<Option<String>> {
    if text.is_empty() {
        return Vec::new();
    }
    let text = text.strip_suffix('\n').unwrap_or(text);
    text.split('\n')
        .map(|l| l.trim_end_matches('\r'))
        .map(|l| (!l.trim().is_empty()).then(|| l.to_string()))
        .collect()
}

/// Scores aligned hypotheses against adapted entries.
pub fn evaluate_corpus(
    entries: &[AdaptedEntry],
    hypotheses: &[Option<String>],
    mapping: &TagsetMapping,
    exec: Execution,
) -> Result<Vec<EntryEval>, EvalError> {
    if entries.len() != hypotheses.len() {
        return Err(EvalError::HypothesisCount {
            expected: entries.len(),
            found: hypotheses.len(),
        });
    }
    let markers = mapping.markers();
    Ok(exec.map_indices(entries.len(), |i| score_entry(&entries[i], hypotheses[i].as_deref(), &markers)))
}

/// Per-entry trace, one row per entry:
/// `entry_id  annotations  matched  correct  found  outcomes`, outcomes
/// comma-separated in annotation order.
pub fn write_trace(evals: &[EntryEval]) -> String {
    let mut out = String::from("entry_id\tannotations\tmatched\tcorrect\tfound\tper_triplet_outcomes\n");
    for e in evals {
        let outcomes: Vec<&str> = e.per_triplet.iter().map(|t| t.outcome.as_str()).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            e.entry_id,
            e.annotations,
            e.matched,
            e.correct,
            e.found,
            if e.unparseable { "unparseable".to_string() } else { outcomes.join(",") }
        ));
    }
    out
}
