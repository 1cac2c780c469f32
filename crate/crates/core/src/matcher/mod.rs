//! Answer selection.
//!
//! Matching runs in two stages. Keyword counting goes first: when a single
//! entry holds strictly more of the question's keywords than any other, its
//! answer wins outright. Otherwise the counts are deadlocked (a shared maximum,
//! or no keyword at all) and every stored question is ranked by Jaro-Winkler
//! proximity to the user's question, keywords ignored. A winning proximity
//! below the configured threshold produces no answer.

mod keyword;
mod normalize;
mod similarity;

use serde::Serialize;
use thiserror::Error;

pub use keyword::{find_largest_keyword, keyword_counts, no_keywords, same_no_of_keywords};
pub use normalize::{normalize, NormalizedText};
pub use similarity::{
    find_largest_percent, jaro, jaro_winkler, jaro_winkler_distance, SimilarityParams,
};

use crate::store::InfoEntry;

#[derive(Debug, Error, PartialEq)]
pub enum MatchError {
    #[error("no entries to match against")]
    EmptyInput,
    #[error("invalid similarity parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Answer,
    NoAnswer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Keyword,
    Similarity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchResult {
    pub outcome: Outcome,
    pub entry_id: Option<u64>,
    pub answer: Option<String>,
    pub stage: Stage,
    pub keyword_counts: Vec<usize>,
    pub proximities: Option<Vec<f64>>,
}

impl MatchResult {
    /// Index of the chosen entry within the scanned list.
    pub fn winner_index(&self, entries: &[InfoEntry]) -> Option<usize> {
        let id = self.entry_id?;
        entries.iter().position(|e| e.id == id)
    }
}

/// Picks an answer for `question` from `entries`.
pub fn respond(
    question: &str,
    entries: &[InfoEntry],
    params: &SimilarityParams,
) -> Result<MatchResult, MatchError> {
    let query = normalize(question);
    let counts = keyword_counts(&query, entries)?;

    if !same_no_of_keywords(&counts)? && !no_keywords(&counts)? {
        let winner = &entries[find_largest_keyword(&counts)?];
        return Ok(MatchResult {
            outcome: Outcome::Answer,
            entry_id: Some(winner.id),
            answer: Some(winner.answer.clone()),
            stage: Stage::Keyword,
            keyword_counts: counts,
            proximities: None,
        });
    }

    let proximities: Vec<f64> = entries
        .iter()
        .map(|e| jaro_winkler(&query.joined, &normalize(&e.question).joined, params))
        .collect();
    let best = find_largest_percent(&proximities)?;
    let (outcome, entry_id, answer) = if proximities[best] >= params.no_answer_threshold {
        let e = &entries[best];
        (Outcome::Answer, Some(e.id), Some(e.answer.clone()))
    } else {
        (Outcome::NoAnswer, None, None)
    };

    Ok(MatchResult {
        outcome,
        entry_id,
        answer,
        stage: Stage::Similarity,
        keyword_counts: counts,
        proximities: Some(proximities),
    })
}
