//! Text normalization shared by matching, spell checking, the sentence gate
//! and the link index.

use serde::Serialize;

/// A question reduced to lowercase tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizedText {
    pub original: String,
    pub tokens: Vec<String>,
    pub joined: String,
}

impl NormalizedText {
    pub fn contains_token(&self, token: &str) -> bool {
        self.tokens.iter().any(|t| t == token)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_lowercase() || c.is_ascii_digit() || c == '\''
}

/// Lowercases `text` and splits it on every character outside `[a-z0-9']`.
///
/// Apostrophes survive only inside a word, so `"don't"` stays one token while
/// quoted words such as `'visa'` lose their quotes.
pub fn normalize(text: &str) -> NormalizedText {
    let lowered = text.to_lowercase();
    let tokens: Vec<String> = lowered
        .split(|c: char| !is_word_char(c))
        .map(|t| t.trim_matches('\''))
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect();
    let joined = tokens.join(" ");
    NormalizedText {
        original: text.to_owned(),
        tokens,
        joined,
    }
}
