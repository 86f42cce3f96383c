use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub position: usize,
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}')
}

/// Splits a hypothesis into word tokens.
///
/// Whitespace separates tokens. A word-internal apostrophe ends a token and
/// stays on its left (`dell'amico` -> `dell'`, `amico`). Leading and
/// trailing characters that are not letters, digits, apostrophes or one of
/// `markers` are stripped; leading apostrophes are stripped too. Case is
/// preserved.
pub fn tokenize(text: &str, markers: &[char]) -> Vec<Token> {
    tokenize_keeping(text, |c| markers.contains(&c))
}

/// [`tokenize`] with an arbitrary predicate for extra characters to keep.
pub fn tokenize_keeping(text: &str, keep_extra: impl Fn(char) -> bool) -> Vec<Token> {
    let keep = |c: char| c.is_alphanumeric() || keep_extra(c);
    let mut out: Vec<Token> = Vec::new();
    let mut push = |piece: &str| {
        let trimmed = piece
            .trim_start_matches(|c: char| !keep(c))
            .trim_end_matches(|c: char| !keep(c) && !is_apostrophe(c));
        if trimmed.chars().any(keep) {
            let position = out.len();
            out.push(Token {
                surface: trimmed.to_string(),
                position,
            });
        }
    };
    for chunk in text.split_whitespace() {
        let mut start = 0;
        let chars: Vec<(usize, char)> = chunk.char_indices().collect();
        for (k, &(i, c)) in chars.iter().enumerate() {
            if !is_apostrophe(c) {
                continue;
            }
            let before = chars[..k].iter().any(|&(j, b)| j >= start && b.is_alphanumeric());
            let after = chars.get(k + 1).is_some_and(|&(_, a)| keep(a));
            if before && after {
                let cut = i + c.len_utf8();
                push(&chunk[start..cut]);
                start = cut;
            }
        }
        push(&chunk[start..]);
    }
    out
}

/// Number of tokens containing at least one marker character.
/// Comparison is case-insensitive; a token counts once.
pub fn count_neomorphemes(tokens: &[Token], markers: &[char]) -> usize {
    let markers: Vec<char> = markers.iter().flat_map(|m| m.to_lowercase()).collect();
    tokens
        .iter()
        .filter(|t| t.surface.chars().flat_map(char::to_lowercase).any(|c| markers.contains(&c)))
        .count()
}
