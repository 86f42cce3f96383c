//! The placeholder tagset used in tagged references and annotations.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

/// Grammatical number carried by a tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Singular,
    Plural,
}

impl Number {
    pub fn as_str(self) -> &'static str {
        match self {
            Number::Singular => "singular",
            Number::Plural => "plural",
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Content words take a suffix tag on a stem; function words are replaced whole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Content,
    Function,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Content => "content",
            Kind::Function => "function",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of the tagset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagDef {
    pub name: String,
    pub category: String,
    pub number: Number,
    pub kind: Kind,
    /// Gendered surface forms the tag stands for (masculine, feminine).
    pub masculine: Vec<String>,
    pub feminine: Vec<String>,
}

/// The set of tags a corpus may use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagsetDefinition {
    tags: Vec<TagDef>,
}

// (name, description, number, kind, masculine forms, feminine forms)
type Row = (&'static str, &'static str, Number, Kind, &'static str, &'static str);

const NEO_GATE_TAGS: &[Row] = {
    use Kind::*;
    use Number::*;
    &[
        ("ENDS", "inflectional morpheme (word ending), singular", Singular, Content, "o e tore", "a essa trice"),
        ("ENDP", "inflectional morpheme (word ending), plural", Plural, Content, "i tori", "e esse trici"),
        ("DARTS", "definite article, singular", Singular, Function, "il lo l'", "la l'"),
        ("DARTP", "definite article, plural", Plural, Function, "i gli", "le"),
        ("IART", "indefinite article", Singular, Function, "uno un", "una un'"),
        ("PARTP", "partitive article, plural", Plural, Function, "dei degli", "delle"),
        ("PREPdiS", "articulated preposition with root 'di', singular", Singular, Function, "del dello dell'", "della dell'"),
        ("PREPdiP", "articulated preposition with root 'di', plural", Plural, Function, "dei degli", "delle"),
        ("PREPaS", "articulated preposition with root 'a', singular", Singular, Function, "al allo all'", "alla all'"),
        ("PREPaP", "articulated preposition with root 'a', plural", Plural, Function, "agli ai", "alle"),
        ("PREPdaS", "articulated preposition with root 'da', singular", Singular, Function, "dal dallo dall'", "dalla dall'"),
        ("PREPdaP", "articulated preposition with root 'da', plural", Plural, Function, "dagli", "dalle"),
        ("PREPinP", "articulated preposition with root 'in', plural", Plural, Function, "negli", "nelle"),
        ("PREPsuS", "articulated preposition with root 'su', singular", Singular, Function, "sul sullo sull'", "sulla sull'"),
        ("PREPsuP", "articulated preposition with root 'su', plural", Plural, Function, "sugli", "sulle"),
        ("DADJquelS", "demonstrative adjective (far), singular", Singular, Function, "quel quello quell'", "quella quell'"),
        ("DADJquelP", "demonstrative adjective (far), plural", Plural, Function, "quegli", "quelle"),
        ("DADJquestS", "demonstrative adjective (near), singular", Singular, Function, "questo quest'", "questa quest'"),
        ("DADJquestP", "demonstrative adjective (near), plural", Plural, Function, "questi", "queste"),
        ("POSS1S", "possessive adjective, 1st person singular, singular", Singular, Function, "mio", "mia"),
        ("POSS1P", "possessive adjective, 1st person singular, plural", Plural, Function, "miei", "mie"),
        ("POSS2S", "possessive adjective, 2nd person singular, singular", Singular, Function, "tuo", "tua"),
        ("POSS2P", "possessive adjective, 2nd person singular, plural", Plural, Function, "tuoi", "tue"),
        ("POSS3S", "possessive adjective, 3rd person singular, singular", Singular, Function, "suo", "sua"),
        ("POSS3P", "possessive adjective, 3rd person singular, plural", Plural, Function, "suoi", "sue"),
        ("POSS4S", "possessive adjective, 1st person plural, singular", Singular, Function, "nostro", "nostra"),
        ("POSS4P", "possessive adjective, 1st person plural, plural", Plural, Function, "nostri", "nostre"),
        ("PRONDOBJS", "direct object pronoun, singular", Singular, Function, "lo", "la"),
        ("PRONDOBJP", "direct object pronoun, plural", Plural, Function, "li", "le"),
    ]
};

impl TagsetDefinition {
    /// The 29-tag Neo-GATE tagset.
    pub fn neo_gate() -> Self {
        let tags = NEO_GATE_TAGS
            .iter()
            .map(|&(name, category, number, kind, masc, fem)| TagDef {
                name: name.to_string(),
                category: category.to_string(),
                number,
                kind,
                masculine: masc.split(' ').map(str::to_string).collect(),
                feminine: fem.split(' ').map(str::to_string).collect(),
            })
            .collect();
        TagsetDefinition { tags }
    }

    /// Builds a custom tagset. Names must be unique.
    pub fn new(tags: Vec<TagDef>) -> Result<Self, String> {
        for (i, t) in tags.iter().enumerate() {
            if t.name.is_empty() || !t.name.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(format!("invalid tag name {:?}", t.name));
            }
            if tags[..i].iter().any(|u| u.name == t.name) {
                return Err(format!("duplicate tag name {:?}", t.name));
            }
        }
        Ok(TagsetDefinition { tags })
    }

    pub fn get(&self, name: &str) -> Option<&TagDef> {
        self.tags.iter().find(|t| t.name == name)
    }

    pub fn tags(&self) -> &[TagDef] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }
}

impl Default for TagsetDefinition {
    fn default() -> Self {
        Self::neo_gate()
    }
}

/// A `<NAME>` placeholder located in a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSpan<'a> {
    /// Byte range of the whole `<NAME>` occurrence.
    pub range: Range<usize>,
    pub name: &'a str,
}

/// Finds every `<NAME>` placeholder, NAME being one or more ASCII alphanumerics.
pub fn scan_tags(text: &str) -> Vec<TagSpan<'_>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'<' {
            let start = i;
            let mut j = i + 1;
            while j < bytes.len() && bytes[j].is_ascii_alphanumeric() {
                j += 1;
            }
            if j > start + 1 && j < bytes.len() && bytes[j] == b'>' {
                out.push(TagSpan {
                    range: start..j + 1,
                    name: &text[start + 1..j],
                });
                i = j + 1;
                continue;
            }
        }
        i += 1;
    }
    out
}
