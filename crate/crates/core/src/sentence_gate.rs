//! Sentence validity gate.
//!
//! A question is accepted only when it holds at least one noun (a pronoun
//! counts) and at least one verb. Tags come from a word list first and from
//! suffix rules for words the list does not know.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::matcher::normalize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Noun,
    Verb,
    Pronoun,
    Other,
}

impl Tag {
    const ALL: [Tag; 4] = [Tag::Noun, Tag::Verb, Tag::Pronoun, Tag::Other];

    fn bit(self) -> u8 {
        match self {
            Tag::Noun => 1,
            Tag::Verb => 2,
            Tag::Pronoun => 4,
            Tag::Other => 8,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Noun => "noun",
            Tag::Verb => "verb",
            Tag::Pronoun => "pronoun",
            Tag::Other => "other",
        }
    }
}

impl std::str::FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown tag {s:?}"))
    }
}

/// The set of tags one word can carry.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct TagSet(u8);

impl TagSet {
    pub fn of(tags: &[Tag]) -> Self {
        tags.iter().fold(TagSet::default(), |set, &t| set.with(t))
    }

    pub fn with(self, tag: Tag) -> Self {
        TagSet(self.0 | tag.bit())
    }

    pub fn union(self, other: TagSet) -> Self {
        TagSet(self.0 | other.0)
    }

    pub fn contains(self, tag: Tag) -> bool {
        self.0 & tag.bit() != 0
    }

    pub fn is_superset_of(self, other: TagSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Tag> {
        Tag::ALL.into_iter().filter(move |t| self.contains(*t))
    }
}

impl fmt::Debug for TagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(Tag::as_str)).finish()
    }
}

impl Serialize for TagSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(None)?;
        for t in self.iter() {
            seq.serialize_element(t.as_str())?;
        }
        seq.end()
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}: {reason}", path.display())]
    Malformed {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("lexicon {} has no entries", path.display())]
    Empty { path: PathBuf },
}

#[derive(Debug, Clone, Default)]
pub struct PosLexicon {
    entries: HashMap<String, TagSet>,
}

impl PosLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `tags` to whatever `word` already carries.
    pub fn insert(&mut self, word: &str, tags: TagSet) {
        let slot = self.entries.entry(word.to_lowercase()).or_default();
        *slot = slot.union(tags);
    }

    pub fn get(&self, word: &str) -> Option<TagSet> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<'a> FromIterator<(&'a str, TagSet)> for PosLexicon {
    fn from_iter<I: IntoIterator<Item = (&'a str, TagSet)>>(iter: I) -> Self {
        let mut lex = PosLexicon::new();
        for (w, t) in iter {
            lex.insert(w, t);
        }
        lex
    }
}

/// Reads `word<TAB>tag[,tag...]` lines. Blank lines and `#` comments are skipped.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<PosLexicon, LexiconError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| LexiconError::Read {
        path: path.to_owned(),
        source,
    })?;
    let mut lex = PosLexicon::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| LexiconError::Malformed {
            path: path.to_owned(),
            line: idx + 1,
            reason,
        };
        let (word, tags) = line
            .split_once('\t')
            .ok_or_else(|| malformed("expected word<TAB>tags".into()))?;
        let mut set = TagSet::default();
        for t in tags.split(',') {
            set = set.with(t.trim().parse().map_err(malformed)?);
        }
        lex.insert(word.trim(), set);
    }
    if lex.is_empty() {
        return Err(LexiconError::Empty {
            path: path.to_owned(),
        });
    }
    Ok(lex)
}

const NOUN_SUFFIXES: [&str; 6] = ["tion", "ment", "ness", "ity", "er", "or"];
const VERB_SUFFIXES: [&str; 6] = ["ize", "ise", "ify", "ate", "ing", "ed"];
// shorter stems ("bed", "for") are too often something else
const MIN_STEM: usize = 2;

fn suffix_tags(word: &str) -> TagSet {
    if !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return TagSet::of(&[Tag::Other]);
    }
    let has = |suffixes: &[&str]| {
        suffixes
            .iter()
            .any(|s| word.len() >= s.len() + MIN_STEM && word.ends_with(s))
    };
    let mut set = TagSet::default();
    if has(&NOUN_SUFFIXES) {
        set = set.with(Tag::Noun);
    }
    if has(&VERB_SUFFIXES) {
        set = set.with(Tag::Verb);
    }
    if set.is_empty() {
        set = set.with(Tag::Other);
    }
    set
}

/// Tags every token: lexicon entry when present, suffix rules otherwise.
pub fn tag<S: AsRef<str>>(tokens: &[S], lexicon: &PosLexicon) -> Vec<TagSet> {
    tokens
        .iter()
        .map(|t| {
            let t = t.as_ref();
            lexicon.get(t).unwrap_or_else(|| suffix_tags(t))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateReport {
    pub tokens: Vec<String>,
    pub tags: Vec<TagSet>,
    pub has_noun: bool,
    pub has_verb: bool,
    pub valid: bool,
}

pub fn validate(sentence: &str, lexicon: &PosLexicon) -> GateReport {
    let tokens = normalize(sentence).tokens;
    let tags = tag(&tokens, lexicon);
    let has_noun = tags
        .iter()
        .any(|t| t.contains(Tag::Noun) || t.contains(Tag::Pronoun));
    let has_verb = tags.iter().any(|t| t.contains(Tag::Verb));
    GateReport {
        tokens,
        tags,
        has_noun,
        has_verb,
        valid: has_noun && has_verb,
    }
}
