use serde::{Deserialize, Serialize};

use super::tokenize::{count_neomorphemes, tokenize, Token};
use crate::paradigm::{AdaptedEntry, AdaptedTriplet, Kind, Number};

/// Which form of a triplet, if any, was found in the hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Unmatched,
    MatchedMasc,
    MatchedFem,
    MatchedNeo,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Unmatched => "unmatched",
            Outcome::MatchedMasc => "masc",
            Outcome::MatchedFem => "fem",
            Outcome::MatchedNeo => "neo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletResult {
    pub outcome: Outcome,
    /// Position of the consumed token.
    pub position: Option<usize>,
    pub kind: Kind,
    pub number: Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryEval {
    pub entry_id: String,
    pub annotations: u64,
    pub matched: u64,
    pub correct: u64,
    pub found: u64,
    /// No hypothesis was available for this entry.
    pub unparseable: bool,
    pub per_triplet: Vec<TripletResult>,
}

impl EntryEval {
    /// Evaluation of an entry whose hypothesis is missing: annotations are
    /// kept, nothing is matched.
    pub fn unparseable(entry_id: &str, triplets: &[AdaptedTriplet]) -> Self {
        EntryEval {
            entry_id: entry_id.to_string(),
            annotations: triplets.len() as u64,
            matched: 0,
            correct: 0,
            found: 0,
            unparseable: true,
            per_triplet: triplets
                .iter()
                .map(|t| TripletResult {
                    outcome: Outcome::Unmatched,
                    position: None,
                    kind: t.kind,
                    number: t.number,
                })
                .collect(),
        }
    }
}

/// Matches annotated triplets against hypothesis tokens.
///
/// Triplets are processed in annotation order. For each one the tokens are
/// scanned left to right for the first unconsumed token equal (ignoring
/// case) to its neomorpheme, masculine or feminine form. A function word with
/// an anchor only matches when the token `distance` positions later starts
/// with the anchor. A matched token is consumed and cannot serve another
/// triplet. `found` counts marker-bearing tokens over the whole hypothesis.
pub fn match_entry(tokens: &[Token], triplets: &[AdaptedTriplet], markers: &[char]) -> EntryEval {
    let lower: Vec<String> = tokens.iter().map(|t| t.surface.to_lowercase()).collect();
    let mut consumed = vec![false; tokens.len()];
    let mut per_triplet = Vec::with_capacity(triplets.len());
    let (mut matched, mut correct) = (0u64, 0u64);

    for t in triplets {
        let neo = t.neo.to_lowercase();
        let masc = t.masc.to_lowercase();
        let fem = t.fem.to_lowercase();
        let anchor = t.anchor.as_ref().map(|a| (a.text.to_lowercase(), a.distance as usize));

        let mut hit = None;
        for (pos, tok) in lower.iter().enumerate() {
            if consumed[pos] {
                continue;
            }
            let outcome = if *tok == neo {
                Outcome::MatchedNeo
            } else if *tok == masc {
                Outcome::MatchedMasc
            } else if *tok == fem {
                Outcome::MatchedFem
            } else {
                continue;
            };
            if let Some((text, distance)) = &anchor {
                match lower.get(pos + distance) {
                    Some(next) if next.starts_with(text.as_str()) => {}
                    _ => continue,
                }
            }
            hit = Some((pos, outcome));
            break;
        }

        let (position, outcome) = match hit {
            Some((pos, outcome)) => {
                consumed[pos] = true;
                matched += 1;
                if outcome == Outcome::MatchedNeo {
                    correct += 1;
                }
                (Some(pos), outcome)
            }
            None => (None, Outcome::Unmatched),
        };
        per_triplet.push(TripletResult {
            outcome,
            position,
            kind: t.kind,
            number: t.number,
        });
    }

    EntryEval {
        entry_id: String::new(),
        annotations: triplets.len() as u64,
        matched,
        correct,
        found: count_neomorphemes(tokens, markers) as u64,
        unparseable: false,
        per_triplet,
    }
}

/// Tokenizes and scores one hypothesis; `None` marks an unparseable output.
pub fn score_entry(entry: &AdaptedEntry, hypothesis: Option<&str>, markers: &[char]) -> EntryEval {
    match hypothesis {
        None => EntryEval::unparseable(&entry.entry_id, &entry.triplets),
        Some(h) => {
            let tokens = tokenize(h, markers);
            let mut eval = match_entry(&tokens, &entry.triplets, markers);
            eval.entry_id = entry.entry_id.clone();
            eval
        }
    }
}
