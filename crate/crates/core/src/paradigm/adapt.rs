use serde::{Deserialize, Serialize};

use super::tagset::{scan_tags, Kind, Number};
use super::{ParadigmError, TagsetMapping};
use crate::corpus::{format_annotation, Anchor, Corpus, Entry};
use crate::exec::Execution;

/// A triplet whose tagged form has been realized in a paradigm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptedTriplet {
    pub masc: String,
    pub fem: String,
    pub neo: String,
    pub kind: Kind,
    pub number: Number,
    pub anchor: Option<Anchor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptedEntry {
    pub entry_id: String,
    pub ref_adapted: String,
    pub triplets: Vec<AdaptedTriplet>,
}

impl AdaptedEntry {
    /// Annotation string with neomorpheme forms in place of tagged forms.
    pub fn annotation(&self) -> String {
        format_annotation(
            self.triplets
                .iter()
                .map(|t| (t.masc.as_str(), t.fem.as_str(), t.neo.as_str(), t.anchor.as_ref())),
        )
    }
}

fn substitute(text: &str, mapping: &TagsetMapping) -> Result<String, ParadigmError> {
    let mut out = String::with_capacity(text.len() + 8);
    let mut last = 0;
    for span in scan_tags(text) {
        let rep = mapping
            .replacement(span.name)
            .ok_or_else(|| ParadigmError::UnknownTag(span.name.to_string()))?;
        out.push_str(&text[last..span.range.start]);
        out.push_str(rep);
        last = span.range.end;
    }
    out.push_str(&text[last..]);
    Ok(out)
}

/// Replaces a tagged form (e.g. `direttor<ENDS>`) with its paradigm form.
/// Never changes case.
pub fn adapt_form(tagged_form: &str, mapping: &TagsetMapping) -> Result<String, ParadigmError> {
    substitute(tagged_form, mapping)
}

/// Realizes a tagged reference in a paradigm.
///
/// Each placeholder is replaced literally; suffix tags thus attach to their
/// stem. When the reference starts with a placeholder, the first alphabetic
/// character of the result is uppercased.
pub fn adapt_reference(ref_tagged: &str, mapping: &TagsetMapping) -> Result<String, ParadigmError> {
    let mut out = substitute(ref_tagged, mapping)?;
    let starts_with_tag = scan_tags(ref_tagged)
        .first()
        .is_some_and(|t| ref_tagged[..t.range.start].trim().is_empty());
    if starts_with_tag {
        if let Some((i, c)) = out.char_indices().find(|(_, c)| c.is_alphabetic()) {
            if c.is_lowercase() {
                let upper: String = c.to_uppercase().collect();
                out.replace_range(i..i + c.len_utf8(), &upper);
            }
        }
    }
    Ok(out)
}

fn adapt_entry(entry: &Entry, mapping: &TagsetMapping) -> Result<AdaptedEntry, ParadigmError> {
    let wrap = |e: ParadigmError| ParadigmError::InEntry {
        entry_id: entry.id.clone(),
        source: Box::new(e),
    };
    let ref_adapted = adapt_reference(&entry.ref_tagged, mapping).map_err(wrap)?;
    let triplets = entry
        .triplets
        .iter()
        .map(|t| {
            Ok(AdaptedTriplet {
                masc: t.masc.clone(),
                fem: t.fem.clone(),
                neo: adapt_form(&t.tagged, mapping)?,
                kind: t.kind,
                number: t.number,
                anchor: t.anchor.clone(),
            })
        })
        .collect::<Result<Vec<_>, ParadigmError>>()
        .map_err(wrap)?;
    Ok(AdaptedEntry {
        entry_id: entry.id.clone(),
        ref_adapted,
        triplets,
    })
}

/// Adapts every entry of a corpus, in corpus order.
pub fn adapt_corpus(corpus: &Corpus, mapping: &TagsetMapping) -> Result<Vec<AdaptedEntry>, ParadigmError> {
    adapt_corpus_with(corpus, mapping, Execution::default())
}

pub fn adapt_corpus_with(
    corpus: &Corpus,
    mapping: &TagsetMapping,
    exec: Execution,
) -> Result<Vec<AdaptedEntry>, ParadigmError> {
    exec.map(&corpus.entries, |e| adapt_entry(e, mapping))
        .into_iter()
        .collect()
}
