//! TF-IDF fitting and transformation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ngrams::{char_ngrams, strip_stopwords_from_text, word_ngrams, TermCounts};
use super::{Analyzer, FeatureError, SparseVector, VectorizerConfig};
use crate::corpus::{Corpus, Document};
use crate::scalar::Scalar;

/// A fitted TF-IDF vectorizer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TfidfModel<S: Scalar> {
    pub config: VectorizerConfig,
    /// term -> dense column index in `0..vocab.len()`.
    pub vocab: BTreeMap<String, usize>,
    /// Per-column IDF weight, always positive.
    pub idf: Vec<S>,
    pub n_docs: usize,
}

impl<S: Scalar> TfidfModel<S> {
    pub fn dim(&self) -> usize {
        self.vocab.len()
    }

    /// Term multiset for a document under this model's analyzer.
    fn terms_of(&self, doc: &Document) -> TermCounts {
        match self.config.analyzer {
            Analyzer::Word => word_ngrams(
                &doc.tokens,
                self.config.ngram_lo,
                self.config.ngram_hi,
                &self.config.stopwords,
            ),
            Analyzer::Char => {
                let text = strip_stopwords_from_text(&doc.cleaned, &self.config.stopwords);
                char_ngrams(&text, self.config.ngram_lo, self.config.ngram_hi)
            }
        }
    }

    /// TF-IDF vector for a document: raw in-vocabulary term counts times
    /// IDF, L2-normalized. Out-of-vocabulary terms are dropped; a document
    /// with no known terms transforms to the zero vector.
    pub fn transform(&self, doc: &Document) -> SparseVector<S> {
        let mut pairs = Vec::new();
        for (term, count) in self.terms_of(doc) {
            if let Some(&col) = self.vocab.get(&term) {
                pairs.push((col, S::from_usize(count) * self.idf[col]));
            }
        }
        let mut v = SparseVector::from_pairs(self.dim(), pairs);
        v.l2_normalize();
        v
    }
}

/// Fit a TF-IDF model on a corpus.
///
/// Vocabulary is every term ranked by total corpus frequency descending
/// (ties by term, ascending), truncated to `max_features`. IDF uses
/// `ln((1 + N) / (1 + df)) + 1`.
pub fn fit_tfidf<S: Scalar>(
    corpus: &Corpus,
    config: &VectorizerConfig,
) -> Result<TfidfModel<S>, FeatureError> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(FeatureError::EmptyCorpus);
    }

    let mut total_freq: BTreeMap<String, usize> = BTreeMap::new();
    let mut doc_freq: BTreeMap<String, usize> = BTreeMap::new();
    let probe = TfidfModel::<S> {
        config: config.clone(),
        vocab: BTreeMap::new(),
        idf: Vec::new(),
        n_docs: 0,
    };
    for doc in &corpus.documents {
        for (term, count) in probe.terms_of(doc) {
            *total_freq.entry(term.clone()).or_insert(0) += count;
            *doc_freq.entry(term).or_insert(0) += 1;
        }
    }

    // Rank by (frequency desc, term asc); BTreeMap iteration already gives
    // the term-ascending order, and the sort is stable.
    let mut ranked: Vec<(&String, usize)> = total_freq.iter().map(|(t, &f)| (t, f)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1));
    ranked.truncate(config.max_features);

    let mut terms: Vec<&String> = ranked.into_iter().map(|(t, _)| t).collect();
    terms.sort(); // columns in term order keeps the vocab map bijective and stable
    let n = corpus.len();
    let mut vocab = BTreeMap::new();
    let mut idf = Vec::with_capacity(terms.len());
    for (col, term) in terms.into_iter().enumerate() {
        let df = doc_freq[term];
        vocab.insert(term.clone(), col);
        idf.push(S::from_f64(((1.0 + n as f64) / (1.0 + df as f64)).ln() + 1.0));
    }

    Ok(TfidfModel {
        config: config.clone(),
        vocab,
        idf,
        n_docs: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn docs(texts: &[&str]) -> Corpus {
        let mut corpus = Corpus::from_documents(
            texts
                .iter()
                .enumerate()
                .map(|(i, t)| Document::new(i.to_string(), *t, None))
                .collect(),
        );
        corpus.preprocess();
        corpus
    }

    fn word_config(lo: usize, hi: usize, cap: usize) -> VectorizerConfig {
        VectorizerConfig {
            analyzer: Analyzer::Word,
            ngram_lo: lo,
            ngram_hi: hi,
            max_features: cap,
            stopwords: BTreeSet::new(),
        }
    }

    #[test]
    fn two_doc_idf_values() {
        // idf(t) = ln((1+N)/(1+df)) + 1 with N = 2.
        let model: TfidfModel<f64> =
            fit_tfidf(&docs(&["a b a", "b c"]), &word_config(1, 1, 10)).unwrap();
        let idf = |t: &str| model.idf[model.vocab[t]];
        let expect_1 = (3.0_f64 / 2.0).ln() + 1.0;
        assert!((idf("a") - expect_1).abs() < 1e-12);
        assert!((idf("a") - 1.405465).abs() < 1e-6);
        assert!((idf("b") - 1.0).abs() < 1e-12);
        assert!((idf("c") - expect_1).abs() < 1e-12);
    }

    #[test]
    fn cap_one_keeps_lexicographically_first_of_tied_terms() {
        // total frequency: a = 2 (both in one doc), b = 2, c = 1; the a/b tie
        // breaks toward "a".
        let model: TfidfModel<f64> =
            fit_tfidf(&docs(&["a b a", "b c"]), &word_config(1, 1, 1)).unwrap();
        assert_eq!(model.dim(), 1);
        assert!(model.vocab.contains_key("a"));
    }

    #[test]
    fn single_doc_idf_is_one() {
        let model: TfidfModel<f64> = fit_tfidf(&docs(&["x"]), &word_config(1, 1, 5)).unwrap();
        assert_eq!(model.idf, vec![1.0]);
    }

    #[test]
    fn transform_matches_hand_arithmetic() {
        let corpus = docs(&["a b a", "b c"]);
        let model: TfidfModel<f64> = fit_tfidf(&corpus, &word_config(1, 1, 10)).unwrap();
        let v = model.transform(&corpus.documents[0]);

        // Unnormalized: a -> 2 * 1.405465..., b -> 1.0; then L2.
        let idf_a = (3.0_f64 / 2.0).ln() + 1.0;
        let raw_a = 2.0 * idf_a;
        let norm = (raw_a * raw_a + 1.0_f64).sqrt();
        let val = |t: &str| {
            v.entries
                .iter()
                .find(|(i, _)| *i == model.vocab[t])
                .map(|(_, v)| *v)
                .unwrap()
        };
        assert!((val("a") - raw_a / norm).abs() < 1e-12);
        assert!((val("b") - 1.0 / norm).abs() < 1e-12);
        assert!((val("a") - 0.942156).abs() < 1e-6);
        assert!((val("b") - 0.335176).abs() < 1e-6);
        assert!((v.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oov_only_doc_transforms_to_empty_vector() {
        let corpus = docs(&["a b a", "b c"]);
        let model: TfidfModel<f64> = fit_tfidf(&corpus, &word_config(1, 1, 10)).unwrap();
        let mut other = Document::new("x", "zz yy", None);
        other.preprocess();
        let v = model.transform(&other);
        assert_eq!(v.dim, model.dim());
        assert!(v.entries.is_empty());
    }

    #[test]
    fn single_known_term_gets_unit_value() {
        let corpus = docs(&["a b a", "b c"]);
        let model: TfidfModel<f64> = fit_tfidf(&corpus, &word_config(1, 1, 10)).unwrap();
        let mut doc = Document::new("x", "b", None);
        doc.preprocess();
        let v = model.transform(&doc);
        assert_eq!(v.entries.len(), 1);
        assert_eq!(v.entries[0].0, model.vocab["b"]);
        assert!((v.entries[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_corpus_rejected() {
        let err = fit_tfidf::<f64>(&Corpus::default(), &word_config(1, 1, 10)).unwrap_err();
        assert!(matches!(err, FeatureError::EmptyCorpus));
    }

    #[test]
    fn vocab_size_is_min_of_cap_and_distinct_terms() {
        let corpus = docs(&["a b c d", "e f"]);
        let small: TfidfModel<f64> = fit_tfidf(&corpus, &word_config(1, 1, 3)).unwrap();
        let large: TfidfModel<f64> = fit_tfidf(&corpus, &word_config(1, 1, 100)).unwrap();
        assert_eq!(small.dim(), 3);
        assert_eq!(large.dim(), 6);
    }

    #[test]
    fn fit_is_bitwise_deterministic() {
        let corpus = docs(&["mày ngu vl", "chào buổi sáng", "vl vkl dcm"]);
        let cfg = VectorizerConfig::char_default(BTreeSet::new());
        let a: TfidfModel<f64> = fit_tfidf(&corpus, &cfg).unwrap();
        let b: TfidfModel<f64> = fit_tfidf(&corpus, &cfg).unwrap();
        assert_eq!(a.vocab, b.vocab);
        assert!(a.idf.iter().zip(&b.idf).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}
