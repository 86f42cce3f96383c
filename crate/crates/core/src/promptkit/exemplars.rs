use serde::{Deserialize, Serialize};

use super::PromptError;
use crate::corpus::{Corpus, Entry, Number};
use crate::paradigm::{adapt_reference, ParadigmError, TagsetMapping};

/// A demonstration drawn from the dev split, realized in one paradigm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exemplar {
    pub entry_id: String,
    pub source: String,
    pub ref_masc: String,
    pub ref_fem: String,
    pub ref_adapted: String,
}

impl Exemplar {
    pub fn from_entry(entry: &Entry, mapping: &TagsetMapping) -> Result<Self, ParadigmError> {
        Ok(Exemplar {
            entry_id: entry.id.clone(),
            source: entry.source.clone(),
            ref_masc: entry.ref_masc.clone(),
            ref_fem: entry.ref_fem.clone(),
            ref_adapted: adapt_reference(&entry.ref_tagged, mapping)?,
        })
    }
}

/// Looks up `ids` in the dev corpus and adapts them, preserving order.
pub fn select_exemplars(dev: &Corpus, ids: &[String], mapping: &TagsetMapping) -> Result<Vec<Exemplar>, PromptError> {
    ids.iter()
        .map(|id| {
            let entry = dev.get(id).ok_or_else(|| PromptError::UnknownExemplar(id.clone()))?;
            Ok(Exemplar::from_entry(entry, mapping)?)
        })
        .collect()
}

/// Orders dev entries by suitability as demonstrations: closest tag count
/// to the corpus mean first, then smallest singular/plural imbalance, then
/// id.
pub fn rank_exemplar_candidates(dev: &Corpus) -> Result<Vec<String>, PromptError> {
    if dev.is_empty() {
        return Err(PromptError::EmptyCorpus);
    }
    let n = dev.len() as u64;
    let total: u64 = dev.iter().map(|e| e.triplets.len() as u64).sum();
    // |density - mean| * n
    let mut keyed: Vec<(u64, u64, &str)> = dev
        .iter()
        .map(|e| {
            let density_gap = (e.triplets.len() as u64 * n).abs_diff(total);
            let balance = (e.count(Number::Singular) as u64).abs_diff(e.count(Number::Plural) as u64);
            (density_gap, balance, e.id.as_str())
        })
        .collect();
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, _, id)| id.to_string()).collect())
}
