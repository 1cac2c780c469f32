//! Spelling gate: unknown words are reported with nearby dictionary words.
//!
//! The gate only advises. It never rewrites the question; the user has to
//! pick a suggestion and resubmit.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::matcher::normalize;

pub const MAX_SUGGESTIONS: usize = 5;
pub const SUGGESTION_RADIUS: usize = 2;

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("cannot read dictionary {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("dictionary {} contains no words", path.display())]
    Empty { path: PathBuf },
}

#[derive(Debug, Clone)]
pub struct Dictionary {
    words: HashSet<String>,
    by_len: BTreeMap<usize, Vec<String>>,
    source_path: PathBuf,
}

impl Dictionary {
    /// Builds a dictionary from in-memory words. Words are trimmed and lowercased.
    pub fn from_words<I, S>(
        words: I,
        source_path: impl Into<PathBuf>,
    ) -> Result<Self, DictionaryError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: HashSet<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        let source_path = source_path.into();
        if words.is_empty() {
            return Err(DictionaryError::Empty { path: source_path });
        }
        let mut by_len: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for w in &words {
            by_len.entry(w.chars().count()).or_default().push(w.clone());
        }
        for bucket in by_len.values_mut() {
            bucket.sort();
        }
        Ok(Self {
            words,
            by_len,
            source_path,
        })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source_path(&self) -> &Path {
        &self.source_path
    }

    /// Dictionary words within [`SUGGESTION_RADIUS`] edits of `word`, best
    /// first. Closer words rank higher; among equals, the one that is closer
    /// when an adjacent swap counts as a single edit wins, then alphabetical
    /// order.
    pub fn suggest(&self, word: &str) -> Vec<String> {
        let len = word.chars().count();
        let lo = len.saturating_sub(SUGGESTION_RADIUS);
        let mut found: Vec<(usize, usize, &String)> = self
            .by_len
            .range(lo..=len + SUGGESTION_RADIUS)
            .flat_map(|(_, bucket)| bucket)
            .filter_map(|cand| {
                let d = edit_distance(word, cand);
                (d <= SUGGESTION_RADIUS).then(|| (d, swap_distance(word, cand), cand))
            })
            .collect();
        found.sort();
        found
            .into_iter()
            .take(MAX_SUGGESTIONS)
            .map(|(_, _, w)| w.clone())
            .collect()
    }
}

/// Reads a one-word-per-line dictionary file.
pub fn load_dictionary(path: impl AsRef<Path>) -> Result<Dictionary, DictionaryError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| DictionaryError::Read {
        path: path.to_owned(),
        source,
    })?;
    Dictionary::from_words(text.lines(), path)
}

/// Levenshtein distance counted in characters.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitute = prev[j] + usize::from(ca != cb);
            cur[j + 1] = substitute.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Edit distance where swapping two adjacent characters costs one edit
/// (optimal string alignment). Only used to order suggestions.
pub fn swap_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut best = (d[i - 1][j] + 1)
                .min(d[i][j - 1] + 1)
                .min(d[i - 1][j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                best = best.min(d[i - 2][j - 2] + 1);
            }
            d[i][j] = best;
        }
    }
    d[a.len()][b.len()]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpellingIssue {
    pub word: String,
    pub position: usize,
    pub suggestions: Vec<String>,
}

fn is_number(token: &str) -> bool {
    token.bytes().all(|b| b.is_ascii_digit())
}

/// One issue per token missing from `dict`. An empty result means the
/// sentence can be submitted.
pub fn check(sentence: &str, dict: &Dictionary) -> Vec<SpellingIssue> {
    normalize(sentence)
        .tokens
        .into_iter()
        .enumerate()
        .filter(|(_, t)| !is_number(t) && !dict.contains(t))
        .map(|(position, word)| SpellingIssue {
            suggestions: dict.suggest(&word),
            word,
            position,
        })
        .collect()
}
