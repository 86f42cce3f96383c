//! Neo-GATE-format corpora: entries, annotation triplets, statistics,
//! validation and inter-annotator agreement.

mod annotation;
mod kappa;
mod tsv;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::paradigm::{Kind, Number};
pub use annotation::{format_annotation, parse_annotation, AnnotationError};
pub use kappa::{aligned_tag_labels, cohen_kappa, KappaError};
pub use tsv::{parse_corpus, write_corpus, ColumnLayout, CORPUS_HEADER};
pub use validate::{validate_corpus, validate_with_mapping, Severity, ValidationIssue};

/// Sub-word of the governing content word that must appear `distance`
/// tokens after a function word for the function word to be scored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Anchor {
    pub text: String,
    pub distance: u32,
}

/// One annotated gendered word: masculine, feminine and tagged forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triplet {
    pub masc: String,
    pub fem: String,
    /// Form carrying exactly one placeholder, e.g. `direttor<ENDS>` or `<DARTS>`.
    pub tagged: String,
    /// Name of the placeholder inside `tagged`, without angle brackets.
    pub tag: String,
    pub kind: Kind,
    pub number: Number,
    pub anchor: Option<Anchor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    pub source: String,
    pub ref_masc: String,
    pub ref_fem: String,
    pub ref_tagged: String,
    pub triplets: Vec<Triplet>,
}

impl Entry {
    pub fn count(&self, number: Number) -> usize {
        self.triplets.iter().filter(|t| t.number == number).count()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub entries: Vec<Entry>,
}

impl Corpus {
    pub fn new(entries: Vec<Entry>) -> Self {
        Corpus { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Entry> {
        self.entries.iter()
    }

    pub fn get(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn ids(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.id.clone()).collect()
    }

    pub fn stats(&self) -> CorpusStats {
        corpus_stats(self)
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Entry;
    type IntoIter = std::slice::Iter<'a, Entry>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Corpus counts in the layout of the benchmark's statistics table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub entries: usize,
    pub tags: usize,
    pub content: usize,
    pub function: usize,
    pub singular: usize,
    pub plural: usize,
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "entries={}", self.entries)?;
        writeln!(f, "tags={}", self.tags)?;
        writeln!(f, "content={}", self.content)?;
        writeln!(f, "function={}", self.function)?;
        writeln!(f, "singular={}", self.singular)?;
        write!(f, "plural={}", self.plural)
    }
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut s = CorpusStats {
        entries: corpus.len(),
        ..Default::default()
    };
    for t in corpus.iter().flat_map(|e| &e.triplets) {
        s.tags += 1;
        match t.kind {
            Kind::Content => s.content += 1,
            Kind::Function => s.function += 1,
        }
        match t.number {
            Number::Singular => s.singular += 1,
            Number::Plural => s.plural += 1,
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("input is not valid UTF-8 at byte {offset} (line {line})")]
    Encoding { line: usize, offset: usize },
    #[error("missing or unrecognised header: {found:?}")]
    BadHeader { found: String },
    #[error("line {line}: expected {expected} columns, found {found}")]
    MalformedRow { line: usize, expected: usize, found: usize },
    #[error("line {line} (entry {entry_id}): empty annotation")]
    EmptyAnnotation { line: usize, entry_id: String },
    #[error("line {line} (entry {entry_id}): unknown tag <{tag}> in {field}")]
    UnknownTag {
        line: usize,
        entry_id: String,
        field: &'static str,
        tag: String,
    },
    #[error("line {line} (entry {entry_id}): {source}")]
    Annotation {
        line: usize,
        entry_id: String,
        #[source]
        source: AnnotationError,
    },
}
