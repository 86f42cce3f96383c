use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Corpus, Entry};
use crate::evaluator::{tokenize, tokenize_keeping};
use crate::paradigm::{adapt_form, scan_tags, Kind, TagsetMapping};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// One finding of [`validate_corpus`]. Displays as
/// `severity<TAB>entry_id<TAB>field<TAB>message`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub entry_id: String,
    pub severity: Severity,
    pub message: String,
    pub location: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.severity, self.entry_id, self.location, self.message)
    }
}

fn issue(entry: &Entry, severity: Severity, location: &str, message: String) -> ValidationIssue {
    ValidationIssue {
        entry_id: entry.id.clone(),
        severity,
        message,
        location: location.to_string(),
    }
}

fn lower_tokens(text: &str) -> Vec<String> {
    tokenize(text, &[]).into_iter().map(|t| t.surface.to_lowercase()).collect()
}

/// Checks the per-entry invariants that parsing alone does not enforce.
///
/// Errors: no triplets, duplicate ids, tags in the tagged reference not
/// covered one-to-one by triplet tagged forms, gendered forms absent from
/// their reference. Warnings: function words without an anchor, anchors
/// that are not found at the stated distance in the gendered references.
pub fn validate_corpus(corpus: &Corpus) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    let mut seen = HashSet::new();
    for e in corpus {
        if !seen.insert(e.id.as_str()) {
            issues.push(issue(e, Severity::Error, "ID", "duplicate entry id".into()));
        }
        validate_entry(e, &mut issues);
    }
    issues
}

fn validate_entry(e: &Entry, issues: &mut Vec<ValidationIssue>) {
    if e.triplets.is_empty() {
        issues.push(issue(e, Severity::Error, "ANNOTATION", "entry has no triplets".into()));
        return;
    }

    let tag_count = scan_tags(&e.ref_tagged).len();
    if tag_count != e.triplets.len() {
        issues.push(issue(
            e,
            Severity::Error,
            "REF-TAGGED",
            format!("{} placeholder tags but {} triplets", tag_count, e.triplets.len()),
        ));
    }

    // tagged words of the reference vs tagged forms of the triplets, as multisets
    let mut tagged_words: HashMap<String, i64> = HashMap::new();
    for t in tokenize_keeping(&e.ref_tagged, |c| c == '<' || c == '>') {
        if !scan_tags(&t.surface).is_empty() {
            *tagged_words.entry(t.surface.to_lowercase()).or_default() += 1;
        }
    }
    for t in &e.triplets {
        *tagged_words.entry(t.tagged.to_lowercase()).or_default() -= 1;
    }
    let mut unbalanced: Vec<_> = tagged_words.into_iter().filter(|(_, n)| *n != 0).collect();
    unbalanced.sort();
    for (form, n) in unbalanced {
        let message = if n > 0 {
            format!("tagged word {form:?} has no matching triplet ({n} extra)")
        } else {
            format!("triplet form {form:?} does not occur in the tagged reference ({} missing)", -n)
        };
        issues.push(issue(e, Severity::Error, "ANNOTATION", message));
    }

    let masc = lower_tokens(&e.ref_masc);
    let fem = lower_tokens(&e.ref_fem);
    for (i, t) in e.triplets.iter().enumerate() {
        if !masc.contains(&t.masc.to_lowercase()) {
            issues.push(issue(
                e,
                Severity::Error,
                "REF-M",
                format!("triplet {}: masculine form {:?} not in reference", i + 1, t.masc),
            ));
        }
        if !fem.contains(&t.fem.to_lowercase()) {
            issues.push(issue(
                e,
                Severity::Error,
                "REF-F",
                format!("triplet {}: feminine form {:?} not in reference", i + 1, t.fem),
            ));
        }
        match (&t.anchor, t.kind) {
            (None, Kind::Function) => issues.push(issue(
                e,
                Severity::Warning,
                "ANNOTATION",
                format!("triplet {}: function word {:?} has no anchor", i + 1, t.tagged),
            )),
            (Some(a), _) => {
                let anchored = |toks: &[String], form: &str| {
                    let form = form.to_lowercase();
                    let anchor = a.text.to_lowercase();
                    toks.iter().enumerate().any(|(p, w)| {
                        *w == form
                            && toks
                                .get(p + a.distance as usize)
                                .is_some_and(|n| n.starts_with(anchor.as_str()))
                    })
                };
                for (field, toks, form) in [("REF-M", &masc, &t.masc), ("REF-F", &fem, &t.fem)] {
                    if !anchored(toks, form) {
                        issues.push(issue(
                            e,
                            Severity::Warning,
                            field,
                            format!(
                                "triplet {}: anchor {}={} not found after {:?}",
                                i + 1,
                                a.text,
                                a.distance,
                                form
                            ),
                        ));
                    }
                }
            }
            (None, Kind::Content) => {}
        }
    }
}

/// Paradigm-specific checks: every tag adapts, and no adapted form
/// coincides with its masculine or feminine form.
pub fn validate_with_mapping(corpus: &Corpus, mapping: &TagsetMapping) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    for e in corpus {
        for (i, t) in e.triplets.iter().enumerate() {
            match adapt_form(&t.tagged, mapping) {
                Ok(neo) => {
                    let neo = neo.to_lowercase();
                    if neo == t.masc.to_lowercase() || neo == t.fem.to_lowercase() {
                        issues.push(issue(
                            e,
                            Severity::Error,
                            "ANNOTATION",
                            format!("triplet {}: {} form {neo:?} equals a gendered form", i + 1, mapping.name()),
                        ));
                    }
                }
                Err(err) => issues.push(issue(e, Severity::Error, "ANNOTATION", err.to_string())),
            }
        }
    }
    issues
}
