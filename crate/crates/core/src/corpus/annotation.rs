//! Annotation column grammar:
//!
//! ```text
//! annotation = triplet (";" SP triplet)* ";"
//! triplet    = FORM_M SP FORM_F SP FORM_TAGGED (SP ANCHOR "=" DIST)?
//! ```

use thiserror::Error;

use super::{Anchor, Triplet};
use crate::paradigm::{scan_tags, Kind, TagsetDefinition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotationError {
    #[error("malformed triplet {triplet:?}: {reason}")]
    MalformedTriplet { triplet: String, reason: String },
    #[error("bad anchor {anchor:?}: {reason}")]
    BadAnchor { anchor: String, reason: String },
    #[error("unknown tag <{0}>")]
    UnknownTag(String),
}

/// Parses an annotation string into triplets, in annotation order.
///
/// Whitespace around separators is tolerated; an empty string yields no
/// triplets.
pub fn parse_annotation(ann: &str, tagset: &TagsetDefinition) -> Result<Vec<Triplet>, AnnotationError> {
    let mut out = Vec::new();
    for chunk in ann.split(';') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        out.push(parse_triplet(chunk, tagset)?);
    }
    Ok(out)
}

fn parse_triplet(chunk: &str, tagset: &TagsetDefinition) -> Result<Triplet, AnnotationError> {
    let malformed = |reason: &str| AnnotationError::MalformedTriplet {
        triplet: chunk.to_string(),
        reason: reason.to_string(),
    };
    let parts: Vec<&str> = chunk.split_whitespace().collect();
    let (forms, anchor_part) = match parts.len() {
        3 => (&parts[..], None),
        4 => (&parts[..3], Some(parts[3])),
        n if n < 3 => return Err(malformed("expected three forms")),
        _ => return Err(malformed("forms must be single tokens")),
    };
    let (masc, fem, tagged) = (forms[0], forms[1], forms[2]);

    let tags = scan_tags(tagged);
    if tags.len() != 1 {
        return Err(malformed("tagged form must contain exactly one placeholder"));
    }
    for f in [masc, fem] {
        if !scan_tags(f).is_empty() {
            return Err(malformed("gendered forms cannot contain placeholders"));
        }
    }
    let tag = tags[0].name;
    let def = tagset
        .get(tag)
        .ok_or_else(|| AnnotationError::UnknownTag(tag.to_string()))?;

    let anchor = match anchor_part {
        None => None,
        Some(raw) => {
            let bad = |reason: &str| AnnotationError::BadAnchor {
                anchor: raw.to_string(),
                reason: reason.to_string(),
            };
            if def.kind == Kind::Content {
                return Err(bad("anchors are only allowed on function words"));
            }
            let (text, dist) = raw.rsplit_once('=').ok_or_else(|| {
                // a fourth token without '=' is a multi-word form
                malformed("forms must be single tokens")
            })?;
            if text.is_empty() {
                return Err(bad("empty anchor"));
            }
            if dist.is_empty() || !dist.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("distance is not a base-10 integer"));
            }
            let distance: u32 = dist.parse().map_err(|_| bad("distance out of range"))?;
            if distance == 0 {
                return Err(bad("distance must be positive"));
            }
            Some(Anchor {
                text: text.to_string(),
                distance,
            })
        }
    };

    Ok(Triplet {
        masc: masc.to_string(),
        fem: fem.to_string(),
        tagged: tagged.to_string(),
        tag: tag.to_string(),
        kind: def.kind,
        number: def.number,
        anchor,
    })
}

/// Serializes triplets back into the canonical annotation string.
pub fn format_annotation<'a, I>(triplets: I) -> String
where
    I: IntoIterator<Item = (&'a str, &'a str, &'a str, Option<&'a Anchor>)>,
{
    let mut out = String::new();
    for (masc, fem, form, anchor) in triplets {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(masc);
        out.push(' ');
        out.push_str(fem);
        out.push(' ');
        out.push_str(form);
        if let Some(a) = anchor {
            out.push(' ');
            out.push_str(&a.text);
            out.push('=');
            out.push_str(&a.distance.to_string());
        }
        out.push(';');
    }
    out
}

impl Triplet {
    pub(crate) fn format_all(triplets: &[Triplet]) -> String {
        format_annotation(
            triplets
                .iter()
                .map(|t| (t.masc.as_str(), t.fem.as_str(), t.tagged.as_str(), t.anchor.as_ref())),
        )
    }
}
