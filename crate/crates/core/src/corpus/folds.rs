//! Stratified k-fold assignment.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, NUM_CLASSES};
use crate::rng;

/// Deterministic stratified fold assignment for a labeled corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// Fold index in `[0, k)` per document, in corpus order.
    pub assignments: Vec<usize>,
    /// Per-class document positions in the shuffled order used for dealing.
    /// The order is what makes "deterministic tail" validation splits
    /// reproducible across model families.
    pub shuffled_by_class: [Vec<usize>; NUM_CLASSES],
    /// Classes with fewer members than k (noted, not an error).
    pub warnings: Vec<String>,
}

impl FoldPlan {
    /// Document positions whose assigned fold is `fold`.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == fold)
            .map(|(i, _)| i)
            .collect()
    }

    /// Document positions outside `fold`, in shuffled per-class order.
    ///
    /// Order is per-class (all class-0 training docs first, then class 1,
    /// then class 2), each class in its shuffled order.
    pub fn train_indices_stratified(&self, fold: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for class_list in &self.shuffled_by_class {
            out.extend(
                class_list
                    .iter()
                    .copied()
                    .filter(|&i| self.assignments[i] != fold),
            );
        }
        out
    }

    /// Split each class's training docs into a head (train) and a 10% tail
    /// (validation), preserving the shuffled order. Every class keeps at
    /// least one training document; classes with a single document get no
    /// validation part.
    pub fn train_val_split(&self, fold: usize, val_fraction: f64) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut val = Vec::new();
        for class_list in &self.shuffled_by_class {
            let in_train: Vec<usize> = class_list
                .iter()
                .copied()
                .filter(|&i| self.assignments[i] != fold)
                .collect();
            let n = in_train.len();
            let mut n_val = (n as f64 * val_fraction).ceil() as usize;
            if n_val >= n {
                n_val = n.saturating_sub(1);
            }
            let cut = n - n_val;
            train.extend(&in_train[..cut]);
            val.extend(&in_train[cut..]);
        }
        (train, val)
    }
}

/// Assign every document to one of `k` folds so that per-class fold sizes
/// differ by at most one.
///
/// Within each class, documents are shuffled with a PRNG derived from
/// `seed` and dealt round-robin to folds `0..k`. Identical
/// (corpus order, k, seed) always produces an identical plan.
pub fn stratified_kfold(corpus: &Corpus, k: usize, seed: u64) -> Result<FoldPlan, CorpusError> {
    if k < 2 {
        return Err(CorpusError::BadK(k));
    }
    let mut by_class: [Vec<usize>; NUM_CLASSES] = Default::default();
    for (i, doc) in corpus.documents.iter().enumerate() {
        let label = doc
            .label
            .ok_or_else(|| CorpusError::UnlabeledDocument { id: doc.id.clone() })?;
        by_class[label.code()].push(i);
    }

    let mut rng = rng::derived(seed, rng::stream::FOLDS);
    let mut assignments = vec![0usize; corpus.len()];
    let mut warnings = Vec::new();
    for (class, indices) in by_class.iter_mut().enumerate() {
        indices.shuffle(&mut rng);
        if !indices.is_empty() && indices.len() < k {
            warnings.push(format!(
                "class {class} has only {} document(s) for {k} folds",
                indices.len()
            ));
        }
        for (pos, &doc_idx) in indices.iter().enumerate() {
            assignments[doc_idx] = pos % k;
        }
    }

    Ok(FoldPlan {
        k,
        seed,
        assignments,
        shuffled_by_class: by_class,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, Label};
    use proptest::prelude::*;

    fn corpus_with_counts(counts: [usize; NUM_CLASSES]) -> Corpus {
        let mut docs = Vec::new();
        for (class, &n) in counts.iter().enumerate() {
            for i in 0..n {
                docs.push(Document::new(
                    format!("{class}-{i}"),
                    "x",
                    Label::from_code(class),
                ));
            }
        }
        Corpus::from_documents(docs)
    }

    fn class_fold_counts(corpus: &Corpus, plan: &FoldPlan) -> Vec<[usize; NUM_CLASSES]> {
        let mut counts = vec![[0usize; NUM_CLASSES]; plan.k];
        for (i, doc) in corpus.documents.iter().enumerate() {
            counts[plan.assignments[i]][doc.label.unwrap().code()] += 1;
        }
        counts
    }

    #[test]
    fn divisible_counts_split_evenly() {
        let corpus = corpus_with_counts([10, 5, 0]);
        let plan = stratified_kfold(&corpus, 5, 1).unwrap();
        for fold in class_fold_counts(&corpus, &plan) {
            assert_eq!(fold[0], 2);
            assert_eq!(fold[1], 1);
        }
    }

    #[test]
    fn paper_scale_proportions_give_3722_or_3723_clean_docs_per_fold() {
        let corpus = corpus_with_counts([18_614, 1_022, 709]);
        let plan = stratified_kfold(&corpus, 5, 42).unwrap();
        for fold in class_fold_counts(&corpus, &plan) {
            assert!(fold[0] == 3722 || fold[0] == 3723, "clean count {}", fold[0]);
        }
    }

    #[test]
    fn identical_inputs_give_identical_plans() {
        let corpus = corpus_with_counts([13, 7, 4]);
        let a = stratified_kfold(&corpus, 5, 99).unwrap();
        let b = stratified_kfold(&corpus, 5, 99).unwrap();
        assert_eq!(a.assignments, b.assignments);
    }

    #[test]
    fn k_below_two_is_rejected() {
        let corpus = corpus_with_counts([3, 3, 3]);
        assert!(matches!(
            stratified_kfold(&corpus, 1, 0),
            Err(CorpusError::BadK(1))
        ));
    }

    #[test]
    fn small_class_noted_not_fatal() {
        let corpus = corpus_with_counts([10, 10, 2]);
        let plan = stratified_kfold(&corpus, 5, 0).unwrap();
        assert_eq!(plan.warnings.len(), 1);
        assert!(plan.warnings[0].contains("class 2"));
    }

    #[test]
    fn train_val_split_is_disjoint_and_covers_training_portion() {
        let corpus = corpus_with_counts([40, 12, 8]);
        let plan = stratified_kfold(&corpus, 5, 7).unwrap();
        let (train, val) = plan.train_val_split(0, 0.1);
        let test = plan.test_indices(0);
        assert_eq!(train.len() + val.len() + test.len(), corpus.len());
        assert!(!val.is_empty());
        let mut all: Vec<usize> = train.iter().chain(&val).chain(&test).copied().collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), corpus.len());
    }

    proptest! {
        #[test]
        fn fold_sizes_balanced_and_cover_exactly_once(
            n0 in 1usize..60, n1 in 1usize..40, n2 in 1usize..20,
            k in 2usize..6, seed in 0u64..1000,
        ) {
            let corpus = corpus_with_counts([n0, n1, n2]);
            let plan = stratified_kfold(&corpus, k, seed).unwrap();
            // every document lands in exactly one fold
            let total: usize = (0..k).map(|f| plan.test_indices(f).len()).sum();
            prop_assert_eq!(total, corpus.len());
            // per-class imbalance bound
            let counts = class_fold_counts(&corpus, &plan);
            for class in 0..NUM_CLASSES {
                let per: Vec<usize> = counts.iter().map(|c| c[class]).collect();
                let min = per.iter().min().unwrap();
                let max = per.iter().max().unwrap();
                prop_assert!(max - min <= 1, "class {} folds {:?}", class, per);
            }
        }
    }
}
