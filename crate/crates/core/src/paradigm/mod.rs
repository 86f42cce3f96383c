//! Neomorpheme paradigms: tagset, mapping files and reference adaptation.

mod adapt;
mod mapping;
mod tagset;

pub use adapt::{adapt_corpus, adapt_corpus_with, adapt_form, adapt_reference, AdaptedEntry, AdaptedTriplet};
pub use mapping::{parse_mapping, TagsetMapping};
pub use tagset::{scan_tags, Kind, Number, TagDef, TagSpan, TagsetDefinition};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParadigmError {
    #[error("mapping has no replacement for tag <{0}>")]
    MissingTag(String),
    #[error("unknown tag <{0}>")]
    UnknownTag(String),
    #[error("replacement {replacement:?} for <{tag}> lacks marker {marker:?}")]
    MissingMarker { tag: String, replacement: String, marker: char },
    #[error("marker {0:?} is not allowed (letter of the Italian alphabet or reserved character)")]
    IllegalMarker(char),
    #[error("mapping line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("mapping is not valid UTF-8 (byte {0})")]
    Encoding(usize),
    #[error("entry {entry_id}: {source}")]
    InEntry {
        entry_id: String,
        #[source]
        source: Box<ParadigmError>,
    },
}
