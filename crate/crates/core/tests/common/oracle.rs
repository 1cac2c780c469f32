//! Reference Jaro-Winkler written straight from the textbook definition,
//! independent of `faqbot::matcher`.

/// Returns (jaro, matched pairs) where pairs are (index in a, index in b).
pub fn jaro_reference(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let longest = a.len().max(b.len()) as i64;
    let window = (longest / 2 - 1).max(0);

    // Record pairs; each position of b may be claimed once, first come first served.
    let mut taken = vec![false; b.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, &ca) in a.iter().enumerate() {
        for j in 0..b.len() {
            let gap = (i as i64 - j as i64).abs();
            if gap <= window && !taken[j] && ca == b[j] {
                taken[j] = true;
                pairs.push((i, j));
                break;
            }
        }
    }
    let m = pairs.len();
    if m == 0 {
        return 0.0;
    }
    // Matched characters of a in a-order versus matched characters of b in b-order.
    let from_a: Vec<char> = pairs.iter().map(|&(i, _)| a[i]).collect();
    let mut b_positions: Vec<usize> = pairs.iter().map(|&(_, j)| j).collect();
    b_positions.sort_unstable();
    let from_b: Vec<char> = b_positions.iter().map(|&j| b[j]).collect();
    let mismatched = (0..m).filter(|&k| from_a[k] != from_b[k]).count();
    let t = mismatched as f64 / 2.0;
    let m = m as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

pub fn jaro_winkler_reference(a: &str, b: &str) -> f64 {
    let j = jaro_reference(a, b);
    let mut prefix = 0;
    for (x, y) in a.chars().zip(b.chars()) {
        if x != y || prefix == 4 {
            break;
        }
        prefix += 1;
    }
    j + prefix as f64 * 0.1 * (1.0 - j)
}

/// Index of the largest value, first on ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for k in 1..values.len() {
        if values[k] > values[best] {
            best = k;
        }
    }
    best
}

/// Lowercase, treat anything outside [a-z0-9'] as a gap, drop edge apostrophes, rejoin with single spaces.
pub fn normalize_reference(text: &str) -> String {
    let lowered = text.to_lowercase();
    let mut words = Vec::new();
    let mut current = String::new();
    for c in lowered.chars() {
        if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '\'' {
            current.push(c);
        } else {
            words.push(std::mem::take(&mut current));
        }
    }
    words.push(current);
    words
        .iter()
        .map(|w| w.trim_matches('\''))
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// count / total as a percentage in hundredths, rounded half up, by exact integer arithmetic.
pub fn percent_hundredths(count: u64, total: u64) -> u64 {
    let scaled = count * 10_000;
    let (whole, rest) = (scaled / total, scaled % total);
    if 2 * rest >= total {
        whole + 1
    } else {
        whole
    }
}
