use std::collections::BTreeMap;

use super::tagset::{Number, TagsetDefinition};
use super::ParadigmError;

const ASTERISK_MAP: &str = include_str!("../../data/asterisk.map");
const SCHWA_MAP: &str = include_str!("../../data/schwa.map");

/// Letters of Italian orthography, including loan letters and accented vowels.
/// A marker drawn from this set could collide with ordinary gendered words.
const ITALIAN_ALPHABET: &str = "abcdefghijklmnopqrstuvwxyzàáèéìíîòóùú";

/// Paradigm definition: what each tag becomes, and which characters mark
/// singular and plural neomorphemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagsetMapping {
    name: String,
    replacements: BTreeMap<String, String>,
    marker_singular: char,
    marker_plural: char,
}

impl TagsetMapping {
    pub fn asterisk() -> Self {
        parse_mapping(ASTERISK_MAP.as_bytes(), &TagsetDefinition::neo_gate()).expect("built-in asterisk mapping")
    }

    pub fn schwa() -> Self {
        parse_mapping(SCHWA_MAP.as_bytes(), &TagsetDefinition::neo_gate()).expect("built-in schwa mapping")
    }

    /// Looks up a built-in paradigm by name (`asterisk`, `schwa`).
    pub fn builtin(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "asterisk" => Some(Self::asterisk()),
            "schwa" => Some(Self::schwa()),
            _ => None,
        }
    }

    /// Assembles and validates a mapping against `tagset`.
    pub fn new(
        name: impl Into<String>,
        replacements: BTreeMap<String, String>,
        marker_singular: char,
        marker_plural: char,
        tagset: &TagsetDefinition,
    ) -> Result<Self, ParadigmError> {
        let mapping = TagsetMapping {
            name: name.into(),
            replacements,
            marker_singular,
            marker_plural,
        };
        mapping.validate(tagset)?;
        Ok(mapping)
    }

    fn validate(&self, tagset: &TagsetDefinition) -> Result<(), ParadigmError> {
        for marker in [self.marker_singular, self.marker_plural] {
            if !marker_is_legal(marker) {
                return Err(ParadigmError::IllegalMarker(marker));
            }
        }
        for tag in self.replacements.keys() {
            if tagset.get(tag).is_none() {
                return Err(ParadigmError::UnknownTag(tag.clone()));
            }
        }
        for def in tagset.tags() {
            let Some(rep) = self.replacements.get(&def.name) else {
                return Err(ParadigmError::MissingTag(def.name.clone()));
            };
            let marker = self.marker_for(def.number);
            if !rep.contains(marker) {
                return Err(ParadigmError::MissingMarker {
                    tag: def.name.clone(),
                    replacement: rep.clone(),
                    marker,
                });
            }
            if rep.chars().any(|c| c.is_whitespace() || c == '<' || c == '>') {
                return Err(ParadigmError::Malformed {
                    line: 0,
                    message: format!("replacement for {} contains whitespace or angle brackets", def.name),
                });
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn marker_singular(&self) -> char {
        self.marker_singular
    }

    pub fn marker_plural(&self) -> char {
        self.marker_plural
    }

    pub fn marker_for(&self, number: Number) -> char {
        match number {
            Number::Singular => self.marker_singular,
            Number::Plural => self.marker_plural,
        }
    }

    /// Distinct marker characters (one for Asterisk, two for Schwa).
    pub fn markers(&self) -> Vec<char> {
        if self.marker_singular == self.marker_plural {
            vec![self.marker_singular]
        } else {
            vec![self.marker_singular, self.marker_plural]
        }
    }

    pub fn replacement(&self, tag: &str) -> Option<&str> {
        self.replacements.get(tag).map(String::as_str)
    }

    pub fn replacements(&self) -> &BTreeMap<String, String> {
        &self.replacements
    }

    /// Applies a character-level substitution to markers and replacements.
    /// Used to derive paradigms that differ only in their marker glyphs.
    pub fn map_chars(&self, f: impl Fn(char) -> char, tagset: &TagsetDefinition) -> Result<Self, ParadigmError> {
        let replacements = self
            .replacements
            .iter()
            .map(|(k, v)| (k.clone(), v.chars().map(&f).collect()))
            .collect();
        TagsetMapping::new(
            self.name.clone(),
            replacements,
            f(self.marker_singular),
            f(self.marker_plural),
            tagset,
        )
    }

    /// Serializes into the mapping file format accepted by [`parse_mapping`].
    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "!name {}\n!marker-singular {}\n!marker-plural {}\n",
            self.name, self.marker_singular, self.marker_plural
        );
        for (tag, rep) in &self.replacements {
            out.push_str(tag);
            out.push('\t');
            out.push_str(rep);
            out.push('\n');
        }
        out
    }
}

pub(crate) fn marker_is_legal(c: char) -> bool {
    let lower: Vec<char> = c.to_lowercase().collect();
    let in_alphabet = lower.len() == 1 && ITALIAN_ALPHABET.contains(lower[0]);
    !(in_alphabet
        || c.is_whitespace()
        || c.is_control()
        || c.is_ascii_digit()
        || matches!(c, '\'' | '\u{2019}' | '<' | '>' | ';' | '='))
}

/// Parses a mapping file.
///
/// Directive lines: `!name <string>`, `!marker-singular <char>`,
/// `!marker-plural <char>`. Data lines: `TAGNAME<TAB>REPLACEMENT`.
/// Lines starting with `#` and blank lines are skipped.
pub fn parse_mapping(raw: &[u8], tagset: &TagsetDefinition) -> Result<TagsetMapping, ParadigmError> {
    let text = std::str::from_utf8(raw).map_err(|e| ParadigmError::Encoding(e.valid_up_to()))?;
    let mut name = None;
    let mut singular = None;
    let mut plural = None;
    let mut replacements = BTreeMap::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |message: String| ParadigmError::Malformed { line: line_no, message };
        if let Some(directive) = line.strip_prefix('!') {
            let (key, value) = directive
                .split_once(' ')
                .ok_or_else(|| malformed(format!("directive without value: {line:?}")))?;
            let value = value.trim();
            match key {
                "name" => name = Some(value.to_string()),
                "marker-singular" | "marker-plural" => {
                    let mut chars = value.chars();
                    let c = match (chars.next(), chars.next()) {
                        (Some(c), None) => c,
                        _ => return Err(malformed(format!("marker must be one character, got {value:?}"))),
                    };
                    if key == "marker-singular" {
                        singular = Some(c);
                    } else {
                        plural = Some(c);
                    }
                }
                other => return Err(malformed(format!("unknown directive !{other}"))),
            }
            continue;
        }
        let (tag, rep) = line
            .split_once('\t')
            .ok_or_else(|| malformed("expected TAG<TAB>REPLACEMENT".to_string()))?;
        let tag = tag.trim().trim_start_matches('<').trim_end_matches('>');
        let rep = rep.trim();
        if rep.is_empty() {
            return Err(malformed(format!("empty replacement for {tag}")));
        }
        if tagset.get(tag).is_none() {
            return Err(ParadigmError::UnknownTag(tag.to_string()));
        }
        if replacements.insert(tag.to_string(), rep.to_string()).is_some() {
            return Err(malformed(format!("duplicate entry for {tag}")));
        }
    }

    let missing = |what: &str| ParadigmError::Malformed {
        line: 0,
        message: format!("missing !{what} directive"),
    };
    let name = name.ok_or_else(|| missing("name"))?;
    let singular = singular.ok_or_else(|| missing("marker-singular"))?;
    let plural = plural.ok_or_else(|| missing("marker-plural"))?;
    TagsetMapping::new(name, replacements, singular, plural, tagset)
}
