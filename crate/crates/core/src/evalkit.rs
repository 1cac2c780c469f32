//! Feedback score and the four-way breakdown of logged exchanges.
//!
//! Labels are applied by a person reading the logs; nothing here tries to
//! classify an exchange automatically.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

pub use crate::store::Category;
use crate::store::{FeedbackEntry, LogEntry, Store, StoreError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{0}")]
    InvalidCategory(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

/// Mean mark; `0.0` when there is no feedback.
pub fn overall(feedback: &[FeedbackEntry]) -> f64 {
    if feedback.is_empty() {
        return 0.0;
    }
    let sum: u64 = feedback.iter().map(|f| u64::from(f.mark)).sum();
    sum as f64 / feedback.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryStats {
    pub counts: BTreeMap<Category, usize>,
    pub total: usize,
    pub percentages: BTreeMap<Category, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Breakdown {
    #[serde(flatten)]
    pub stats: CategoryStats,
    pub unlabeled: usize,
}

/// `100 * count / total` rounded half-up to two decimals, computed in
/// integer hundredths so the rounding is exact.
fn percent(count: usize, total: usize) -> f64 {
    let (count, total) = (count as u128, total as u128);
    let hundredths = (20_000 * count + total) / (2 * total);
    hundredths as f64 / 100.0
}

impl CategoryStats {
    pub fn from_counts(counts: BTreeMap<Category, usize>) -> Self {
        let mut full: BTreeMap<Category, usize> = Category::ALL.iter().map(|&c| (c, 0)).collect();
        for (c, n) in counts {
            *full.entry(c).or_default() += n;
        }
        let total: usize = full.values().sum();
        let percentages = full
            .iter()
            .map(|(&c, &n)| (c, if total == 0 { 0.0 } else { percent(n, total) }))
            .collect();
        Self {
            counts: full,
            total,
            percentages,
        }
    }
}

/// Counts labelled logs per category. Unlabelled logs are only counted.
pub fn breakdown(logs: &[LogEntry]) -> Breakdown {
    let mut counts = BTreeMap::new();
    let mut unlabeled = 0;
    for log in logs {
        match log.label {
            Some(c) => *counts.entry(c).or_default() += 1,
            None => unlabeled += 1,
        }
    }
    Breakdown {
        stats: CategoryStats::from_counts(counts),
        unlabeled,
    }
}

/// Persists a category on a log row, replacing any earlier label.
pub fn label(store: &Store, log_id: u64, category: &str) -> Result<LogEntry, EvalError> {
    let category: Category = category.parse().map_err(EvalError::InvalidCategory)?;
    Ok(store.set_log_label(log_id, Some(category))?)
}

/// Aligned plain-text rendering of a breakdown.
pub fn render_table(b: &Breakdown) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<15} {:>7} {:>9}", "category", "count", "percent");
    for c in Category::ALL {
        let _ = writeln!(
            out,
            "{:<15} {:>7} {:>8.2}%",
            c.as_str(),
            b.stats.counts[&c],
            b.stats.percentages[&c]
        );
    }
    let _ = writeln!(out, "{:<15} {:>7}", "total", b.stats.total);
    let _ = writeln!(out, "{:<15} {:>7}", "unlabeled", b.unlabeled);
    out
}
