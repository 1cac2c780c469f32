//! Jaro and Jaro-Winkler string proximity.

use serde::{Deserialize, Serialize};

use super::MatchError;

/// Tuning knobs for the similarity stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityParams {
    /// Winkler prefix scaling factor.
    pub prefix_weight: f64,
    /// Longest common prefix that earns the Winkler bonus.
    pub max_prefix: usize,
    /// A winning proximity below this means "no answer".
    pub no_answer_threshold: f64,
}

impl Default for SimilarityParams {
    fn default() -> Self {
        Self {
            prefix_weight: 0.1,
            max_prefix: 4,
            no_answer_threshold: 0.55,
        }
    }
}

impl SimilarityParams {
    pub fn with_threshold(threshold: f64) -> Result<Self, MatchError> {
        let params = Self {
            no_answer_threshold: threshold,
            ..Self::default()
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), MatchError> {
        // p * max_prefix must not exceed 1 or the score can leave [0, 1].
        if !(self.prefix_weight > 0.0 && self.prefix_weight * self.max_prefix as f64 <= 1.0) {
            return Err(MatchError::InvalidParams(format!(
                "prefix_weight {} with max_prefix {} leaves the [0, 1] range",
                self.prefix_weight, self.max_prefix
            )));
        }
        if !(0.0..=1.0).contains(&self.no_answer_threshold) {
            return Err(MatchError::InvalidParams(format!(
                "no_answer_threshold {} is outside [0, 1]",
                self.no_answer_threshold
            )));
        }
        Ok(())
    }
}

/// Jaro similarity over Unicode scalar values.
pub fn jaro(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    jaro_chars(&a, &b)
}

fn jaro_chars(a: &[char], b: &[char]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }

    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_matched = vec![false; a.len()];
    let mut b_matched = vec![false; b.len()];
    let mut matches = 0usize;

    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_matched[j] && b[j] == ca {
                a_matched[i] = true;
                b_matched[j] = true;
                matches += 1;
                break;
            }
        }
    }

    if matches == 0 {
        return 0.0;
    }

    let a_seq = a.iter().zip(&a_matched).filter(|(_, &m)| m).map(|(c, _)| c);
    let b_seq = b.iter().zip(&b_matched).filter(|(_, &m)| m).map(|(c, _)| c);
    let half_transpositions = a_seq.zip(b_seq).filter(|(x, y)| x != y).count();

    let m = matches as f64;
    let t = half_transpositions as f64 / 2.0;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Jaro-Winkler proximity: Jaro boosted by a shared prefix of up to
/// `params.max_prefix` characters.
pub fn jaro_winkler(a: &str, b: &str, params: &SimilarityParams) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let j = jaro_chars(&a, &b);
    let prefix = a
        .iter()
        .zip(&b)
        .take(params.max_prefix)
        .take_while(|(x, y)| x == y)
        .count();
    j + prefix as f64 * params.prefix_weight * (1.0 - j)
}

/// Complement of [`jaro_winkler`]. Diagnostic only; selection uses proximity.
pub fn jaro_winkler_distance(a: &str, b: &str, params: &SimilarityParams) -> f64 {
    1.0 - jaro_winkler(a, b, params)
}

/// Index of the highest score; the first one wins a tie.
pub fn find_largest_percent(scores: &[f64]) -> Result<usize, MatchError> {
    if scores.is_empty() {
        return Err(MatchError::EmptyInput);
    }
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    Ok(best)
}
