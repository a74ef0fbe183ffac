//! N-gram enumeration for the word and char analyzers.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

/// Term multiset: term -> occurrence count. BTreeMap keeps iteration
/// deterministic for vocabulary ranking.
pub type TermCounts = BTreeMap<String, usize>;

/// All word n-grams of sizes `lo..=hi` over the token sequence, after
/// dropping stopword tokens. N-grams are the surviving tokens joined by
/// single spaces.
pub fn word_ngrams(
    tokens: &[String],
    lo: usize,
    hi: usize,
    stopwords: &BTreeSet<String>,
) -> TermCounts {
    let filtered: Vec<&String> = tokens.iter().filter(|t| !stopwords.contains(*t)).collect();
    let mut counts = TermCounts::new();
    for n in lo..=hi {
        if n == 0 || n > filtered.len() {
            continue;
        }
        for window in filtered.windows(n) {
            let term = window
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            *counts.entry(term).or_insert(0) += 1;
        }
    }
    counts
}

/// All character n-grams of sizes `lo..=hi` over the text, spaces included.
pub fn char_ngrams(text: &str, lo: usize, hi: usize) -> TermCounts {
    let chars: Vec<char> = text.chars().collect();
    let mut counts = TermCounts::new();
    for n in lo..=hi {
        if n == 0 || n > chars.len() {
            continue;
        }
        for window in chars.windows(n) {
            *counts.entry(window.iter().collect()).or_insert(0) += 1;
        }
    }
    counts
}

/// Remove stopword words from cleaned text before char n-gram extraction.
///
/// Cleaned text is single-spaced, so pieces are compared verbatim against
/// the stopword set and survivors are rejoined with single spaces.
pub fn strip_stopwords_from_text(text: &str, stopwords: &BTreeSet<String>) -> String {
    if stopwords.is_empty() {
        return text.to_string();
    }
    text.split(' ')
        .filter(|piece| !stopwords.contains(*piece))
        .collect::<Vec<_>>()
        .join(" ")
}
