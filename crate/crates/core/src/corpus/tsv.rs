use super::{parse_annotation, AnnotationError, Corpus, CorpusError, Entry, Triplet};
use crate::paradigm::{scan_tags, TagsetDefinition};

/// Header of the canonical corpus file.
pub const CORPUS_HEADER: &str = "ID\tSOURCE\tREF-M\tREF-F\tREF-TAGGED\tANNOTATION";

/// Column positions of the six fields within a row.
///
/// The canonical header maps to `0..6`. Other headers are matched by
/// column name (case-insensitive, `-`/`_`/space interchangeable) so that
/// files with a different column order or extra columns can be imported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnLayout {
    /// `None` when the file has no id column; row numbers are used instead.
    pub id: Option<usize>,
    pub source: usize,
    pub ref_masc: usize,
    pub ref_fem: usize,
    pub ref_tagged: usize,
    pub annotation: usize,
    pub width: usize,
}

impl ColumnLayout {
    pub const CANONICAL: ColumnLayout = ColumnLayout {
        id: Some(0),
        source: 1,
        ref_masc: 2,
        ref_fem: 3,
        ref_tagged: 4,
        annotation: 5,
        width: 6,
    };

    pub fn from_header(header: &str) -> Option<ColumnLayout> {
        if header == CORPUS_HEADER {
            return Some(Self::CANONICAL);
        }
        let names: Vec<String> = header
            .split('\t')
            .map(|c| c.trim().to_ascii_uppercase().replace(['_', ' '], "-"))
            .collect();
        let find = |aliases: &[&str]| names.iter().position(|n| aliases.contains(&n.as_str()));
        Some(ColumnLayout {
            id: find(&["ID", "SENTENCE-ID", "SEG-ID", "ENTRY-ID"]),
            source: find(&["SOURCE", "SRC", "EN", "SOURCE-EN"])?,
            ref_masc: find(&["REF-M", "REF-MASC", "REF-MASCULINE", "MASCULINE"])?,
            ref_fem: find(&["REF-F", "REF-FEM", "REF-FEMININE", "FEMININE"])?,
            ref_tagged: find(&["REF-TAGGED", "REF-T", "TAGGED", "REF-TAG"])?,
            annotation: find(&["ANNOTATION", "ANNOTATIONS", "ANN"])?,
            width: names.len(),
        })
    }
}

/// Parses a corpus TSV (UTF-8, LF or CRLF line endings).
pub fn parse_corpus(raw: &[u8], tagset: &TagsetDefinition) -> Result<Corpus, CorpusError> {
    let text = std::str::from_utf8(raw).map_err(|e| {
        let offset = e.valid_up_to();
        let line = raw[..offset].iter().filter(|&&b| b == b'\n').count() + 1;
        CorpusError::Encoding { line, offset }
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut lines = text.split('\n').enumerate();
    let header = lines.next().map(|(_, l)| l.trim_end_matches('\r')).unwrap_or("");
    let layout = ColumnLayout::from_header(header).ok_or_else(|| CorpusError::BadHeader {
        found: header.to_string(),
    })?;

    let mut entries = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != layout.width {
            return Err(CorpusError::MalformedRow {
                line: line_no,
                expected: layout.width,
                found: cols.len(),
            });
        }
        let id = match layout.id {
            Some(i) => cols[i].to_string(),
            None => (entries.len() + 1).to_string(),
        };
        let annotation = cols[layout.annotation];
        if annotation.trim().is_empty() {
            return Err(CorpusError::EmptyAnnotation { line: line_no, entry_id: id });
        }
        let triplets = parse_annotation(annotation, tagset).map_err(|source| match source {
            AnnotationError::UnknownTag(tag) => CorpusError::UnknownTag {
                line: line_no,
                entry_id: id.clone(),
                field: "ANNOTATION",
                tag,
            },
            source => CorpusError::Annotation {
                line: line_no,
                entry_id: id.clone(),
                source,
            },
        })?;
        let ref_tagged = cols[layout.ref_tagged];
        if let Some(t) = scan_tags(ref_tagged).into_iter().find(|t| tagset.get(t.name).is_none()) {
            return Err(CorpusError::UnknownTag {
                line: line_no,
                entry_id: id,
                field: "REF-TAGGED",
                tag: t.name.to_string(),
            });
        }
        entries.push(Entry {
            id,
            source: cols[layout.source].to_string(),
            ref_masc: cols[layout.ref_masc].to_string(),
            ref_fem: cols[layout.ref_fem].to_string(),
            ref_tagged: ref_tagged.to_string(),
            triplets,
        });
    }
    Ok(Corpus { entries })
}

/// Writes a corpus in the canonical layout, LF line endings.
pub fn write_corpus(corpus: &Corpus) -> String {
    let mut out = String::with_capacity(corpus.len() * 256);
    out.push_str(CORPUS_HEADER);
    out.push('\n');
    for e in corpus {
        for field in [&e.id, &e.source, &e.ref_masc, &e.ref_fem, &e.ref_tagged] {
            out.push_str(field);
            out.push('\t');
        }
        out.push_str(&Triplet::format_all(&e.triplets));
        out.push('\n');
    }
    out
}
