//! Corpus statistics: per-label document counts, token totals, average lengths.

use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, ALL_LABELS, NUM_CLASSES};

/// One row of the statistics table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelStats {
    pub count: usize,
    /// Summed token counts over the row's documents.
    pub token_total: usize,
    /// `token_total / count`, or 0 when the row is empty.
    pub avg_len: f64,
}

impl LabelStats {
    fn from_counts(count: usize, token_total: usize) -> LabelStats {
        let avg_len = if count == 0 {
            0.0
        } else {
            token_total as f64 / count as f64
        };
        LabelStats {
            count,
            token_total,
            avg_len,
        }
    }
}

/// Statistics table: one row per label plus an overall row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusStats {
    pub per_label: [LabelStats; NUM_CLASSES],
    pub overall: LabelStats,
}

/// Tally documents and tokens per label.
///
/// Requires every document to be labeled and tokenized
/// ([`Corpus::preprocess`] first).
pub fn compute_stats(corpus: &Corpus) -> Result<CorpusStats, CorpusError> {
    let mut counts = [0usize; NUM_CLASSES];
    let mut tokens = [0usize; NUM_CLASSES];
    for doc in &corpus.documents {
        let label = doc
            .label
            .ok_or_else(|| CorpusError::UnlabeledDocument { id: doc.id.clone() })?;
        counts[label.code()] += 1;
        tokens[label.code()] += doc.tokens.len();
    }
    let per_label: [LabelStats; NUM_CLASSES] = std::array::from_fn(|c| {
        debug_assert_eq!(ALL_LABELS[c].code(), c);
        LabelStats::from_counts(counts[c], tokens[c])
    });
    let overall = LabelStats::from_counts(counts.iter().sum(), tokens.iter().sum());
    Ok(CorpusStats { per_label, overall })
}
