//! Keyword counting and the deadlock predicates.

use std::collections::HashSet;

use super::{MatchError, NormalizedText};
use crate::store::InfoEntry;

/// For every entry, the number of its distinct keywords found as whole tokens
/// in `query`.
pub fn keyword_counts(
    query: &NormalizedText,
    entries: &[InfoEntry],
) -> Result<Vec<usize>, MatchError> {
    if entries.is_empty() {
        return Err(MatchError::EmptyInput);
    }
    let tokens: HashSet<&str> = query.tokens.iter().map(String::as_str).collect();
    Ok(entries
        .iter()
        .map(|entry| {
            let distinct: HashSet<&str> = entry.keywords.iter().map(String::as_str).collect();
            distinct.iter().filter(|k| tokens.contains(*k)).count()
        })
        .collect())
}

/// Index of the highest count, smallest index on ties. Check
/// [`same_no_of_keywords`] before trusting the result.
pub fn find_largest_keyword(counts: &[usize]) -> Result<usize, MatchError> {
    let max = counts.iter().copied().max().ok_or(MatchError::EmptyInput)?;
    Ok(counts.iter().position(|&c| c == max).unwrap_or(0))
}

/// A positive maximum shared by two or more entries.
pub fn same_no_of_keywords(counts: &[usize]) -> Result<bool, MatchError> {
    let max = counts.iter().copied().max().ok_or(MatchError::EmptyInput)?;
    Ok(max > 0 && counts.iter().filter(|&&c| c == max).count() >= 2)
}

/// No entry scored a single keyword.
pub fn no_keywords(counts: &[usize]) -> Result<bool, MatchError> {
    if counts.is_empty() {
        return Err(MatchError::EmptyInput);
    }
    Ok(counts.iter().all(|&c| c == 0))
}
