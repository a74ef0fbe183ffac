//! Word- and character-level TF-IDF feature extraction.

mod ngrams;
mod sparse;
mod tfidf;

pub use ngrams::{char_ngrams, word_ngrams};
pub use sparse::{union_features, SparseVector};
pub use tfidf::{fit_tfidf, TfidfModel};

use std::collections::BTreeSet;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// N-gram source: token sequence or raw character stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analyzer {
    Word,
    Char,
}

/// Configuration for one TF-IDF vectorizer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorizerConfig {
    pub analyzer: Analyzer,
    pub ngram_lo: usize,
    pub ngram_hi: usize,
    pub max_features: usize,
    pub stopwords: BTreeSet<String>,
}

impl VectorizerConfig {
    /// Word analyzer, 1..=3-grams, 20,000 feature cap.
    pub fn word_default(stopwords: BTreeSet<String>) -> VectorizerConfig {
        VectorizerConfig {
            analyzer: Analyzer::Word,
            ngram_lo: 1,
            ngram_hi: 3,
            max_features: 20_000,
            stopwords,
        }
    }

    /// Char analyzer, 3..=6-grams, 40,000 feature cap.
    pub fn char_default(stopwords: BTreeSet<String>) -> VectorizerConfig {
        VectorizerConfig {
            analyzer: Analyzer::Char,
            ngram_lo: 3,
            ngram_hi: 6,
            max_features: 40_000,
            stopwords,
        }
    }

    pub fn validate(&self) -> Result<(), FeatureError> {
        if self.ngram_lo < 1 || self.ngram_lo > self.ngram_hi {
            return Err(FeatureError::BadNgramRange(self.ngram_lo, self.ngram_hi));
        }
        if self.max_features < 1 {
            return Err(FeatureError::BadFeatureCap);
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("cannot fit a vectorizer on an empty corpus")]
    EmptyCorpus,
    #[error("invalid n-gram range ({0}, {1})")]
    BadNgramRange(usize, usize),
    #[error("max_features must be at least 1")]
    BadFeatureCap,
}

/// Read a stopword file: UTF-8, one token per line, `#` comment lines and
/// blank lines ignored. Tokens are lowercased to match cleaned text.
pub fn load_stopwords(path: &Path) -> std::io::Result<BTreeSet<String>> {
    let file = std::fs::File::open(path)?;
    let mut set = BTreeSet::new();
    for line in std::io::BufReader::new(file).lines() {
        let line = line?;
        let token = line.trim();
        if token.is_empty() || token.starts_with('#') {
            continue;
        }
        set.insert(token.to_lowercase());
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn stopword_file_skips_comments_and_blanks() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment\nthe\n\nLà\n").unwrap();
        let set = load_stopwords(f.path()).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.contains("the"));
        assert!(set.contains("là"));
    }
}
