//! Fallback link search over a local corpus of admissions pages.
//!
//! Documents are scored with term frequency times a log-scaled inverse
//! document frequency, summed over the distinct tokens of the query.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matcher::normalize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkDoc {
    pub url: String,
    pub title: String,
    #[serde(default)]
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredLink {
    pub url: String,
    pub title: String,
    pub score: f64,
}

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("link corpus is empty")]
    EmptyCorpus,
    #[error("duplicate url {0}")]
    DuplicateUrl(String),
    #[error("document {0} has an empty url")]
    EmptyUrl(usize),
    #[error("cannot read link corpus {}: {source}", path.display())]
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
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkIndex {
    docs: Vec<LinkDoc>,
    doc_terms: Vec<HashMap<String, usize>>,
    doc_freq: HashMap<String, usize>,
}

impl LinkIndex {
    pub fn docs(&self) -> &[LinkDoc] {
        &self.docs
    }

    pub fn doc_frequency(&self, token: &str) -> usize {
        self.doc_freq.get(token).copied().unwrap_or(0)
    }

    pub fn term_count(&self, doc: usize, token: &str) -> usize {
        self.doc_terms[doc].get(token).copied().unwrap_or(0)
    }

    /// Best `k` documents for `query`, highest score first. Documents that
    /// share no token with the query are never returned.
    pub fn search(&self, query: &str, k: usize) -> Vec<ScoredLink> {
        let n = self.docs.len() as f64;
        let mut seen = HashSet::new();
        let terms: Vec<(String, f64)> = normalize(query)
            .tokens
            .into_iter()
            .filter(|t| seen.insert(t.clone()))
            .filter_map(|t| {
                let df = self.doc_frequency(&t);
                (df > 0).then(|| {
                    let idf = (1.0 + n / df as f64).ln();
                    (t, idf)
                })
            })
            .collect();

        let mut scored: Vec<(usize, f64)> = self
            .doc_terms
            .iter()
            .enumerate()
            .filter_map(|(i, counts)| {
                let mut hit = false;
                let score = terms
                    .iter()
                    .map(|(t, idf)| {
                        let tf = counts.get(t).copied().unwrap_or(0);
                        hit |= tf > 0;
                        tf as f64 * idf
                    })
                    .sum::<f64>();
                hit.then_some((i, score))
            })
            .collect();
        // stable sort keeps corpus order for equal scores
        scored.sort_by(|a, b| b.1.total_cmp(&a.1));
        scored
            .into_iter()
            .take(k)
            .map(|(i, score)| ScoredLink {
                url: self.docs[i].url.clone(),
                title: self.docs[i].title.clone(),
                score,
            })
            .collect()
    }
}

pub fn build_index(corpus: Vec<LinkDoc>) -> Result<LinkIndex, IndexError> {
    if corpus.is_empty() {
        return Err(IndexError::EmptyCorpus);
    }
    let mut urls = HashSet::new();
    let mut doc_terms = Vec::with_capacity(corpus.len());
    let mut doc_freq: HashMap<String, usize> = HashMap::new();
    for (i, doc) in corpus.iter().enumerate() {
        if doc.url.trim().is_empty() {
            return Err(IndexError::EmptyUrl(i));
        }
        if !urls.insert(doc.url.as_str()) {
            return Err(IndexError::DuplicateUrl(doc.url.clone()));
        }
        let mut counts: HashMap<String, usize> = HashMap::new();
        for t in normalize(&doc.title)
            .tokens
            .into_iter()
            .chain(normalize(&doc.body).tokens)
        {
            *counts.entry(t).or_default() += 1;
        }
        for t in counts.keys() {
            *doc_freq.entry(t.clone()).or_default() += 1;
        }
        doc_terms.push(counts);
    }
    Ok(LinkIndex {
        docs: corpus,
        doc_terms,
        doc_freq,
    })
}

/// Reads a JSON Lines corpus of `{url, title, body}` objects.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<LinkDoc>, IndexError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| IndexError::Read {
        path: path.to_owned(),
        source,
    })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| IndexError::Malformed {
                path: path.to_owned(),
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}
