//! Stratified cross-validation, the confusion-matrix metrics, and the
//! policies × classifiers comparison grid.
//!
//! Fold hygiene: the vocabulary and IDF of every fold come from the nine
//! training folds only, so no test review can influence the model it is
//! scored by. Metrics are pooled (micro-averaged) over the per-fold
//! confusion matrices; the report labels the aggregation mode.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{predict_label, train_model, ClassifierKind, TrainConfig};
use crate::corpus::{corpus_stats, LabeledCorpus, NegationStats, PolarityLabel};
use crate::error::{Error, Result};
use crate::features::{build_matrix, build_vocabulary, compute_idf, remove_stopwords, vectorize};
use crate::negation::ScopePolicy;
use crate::preprocess::TokenizedReview;
use crate::Resources;

/// Prediction-versus-gold counts, with positive as the target class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub true_neg: usize,
    pub false_pos: usize,
    pub false_neg: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }

    pub fn count(&mut self, predicted: PolarityLabel, gold: PolarityLabel) {
        use PolarityLabel::{Negative, Positive};
        match (predicted, gold) {
            (Positive, Positive) => self.true_pos += 1,
            (Negative, Negative) => self.true_neg += 1,
            (Positive, Negative) => self.false_pos += 1,
            (Negative, Positive) => self.false_neg += 1,
        }
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        self.true_pos += other.true_pos;
        self.true_neg += other.true_neg;
        self.false_pos += other.false_pos;
        self.false_neg += other.false_neg;
    }
}

/// Tally predictions against gold labels.
pub fn confusion_matrix(
    predicted: &[PolarityLabel],
    gold: &[PolarityLabel],
) -> Result<ConfusionMatrix> {
    if predicted.len() != gold.len() {
        return Err(Error::Data(format!(
            "predicted and gold lengths differ ({} vs {})",
            predicted.len(),
            gold.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::Data("cannot tally an empty prediction list".into()));
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &g) in predicted.iter().zip(gold) {
        cm.count(p, g);
    }
    Ok(cm)
}

/// Accuracy, precision, and recall. Precision is absent when nothing was
/// predicted positive; recall is absent when nothing is positive in gold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

/// accuracy = (tp+tn)/total, precision = tp/(tp+fp), recall = tp/(tp+fn).
pub fn compute_metrics(cm: &ConfusionMatrix) -> Result<Metrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::Data("confusion matrix is all zero".into()));
    }
    let accuracy = (cm.true_pos + cm.true_neg) as f64 / total as f64;
    let precision = match cm.true_pos + cm.false_pos {
        0 => None,
        denom => Some(cm.true_pos as f64 / denom as f64),
    };
    let recall = match cm.true_pos + cm.false_neg {
        0 => None,
        denom => Some(cm.true_pos as f64 / denom as f64),
    };
    Ok(Metrics {
        accuracy,
        precision,
        recall,
    })
}

/// Assignment of every review id to a fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub n_folds: usize,
    pub assignments: HashMap<String, usize>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn fold_of(&self, id: &str) -> Option<usize> {
        self.assignments.get(id).copied()
    }
}

/// Stratified folds: each class is shuffled with the seed and dealt
/// round-robin, so per-class fold sizes differ by at most one. Every class
/// must have at least `n` members and every review must be labeled.
pub fn stratified_folds(corpus: &LabeledCorpus, n: usize, seed: u64) -> Result<FoldPlan> {
    if n < 1 {
        return Err(Error::Data("fold count must be at least 1".into()));
    }
    let mut by_class: BTreeMap<PolarityLabel, Vec<&str>> = BTreeMap::new();
    for review in &corpus.reviews {
        let label = review.label.ok_or_else(|| {
            Error::Data(format!("review {:?} is unlabeled; folds require labels", review.id))
        })?;
        by_class.entry(label).or_default().push(&review.id);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = HashMap::with_capacity(corpus.len());
    for (label, mut ids) in by_class {
        if ids.len() < n {
            return Err(Error::Data(format!(
                "class {label} has {} reviews, fewer than {n} folds",
                ids.len()
            )));
        }
        ids.shuffle(&mut rng);
        for (i, id) in ids.into_iter().enumerate() {
            assignments.insert(id.to_string(), i % n);
        }
    }
    Ok(FoldPlan {
        n_folds: n,
        assignments,
        seed,
    })
}

/// Unstratified variant: one seeded shuffle over all reviews, dealt
/// round-robin. Labels are not consulted.
pub fn unstratified_folds(corpus: &LabeledCorpus, n: usize, seed: u64) -> Result<FoldPlan> {
    if n < 1 {
        return Err(Error::Data("fold count must be at least 1".into()));
    }
    if corpus.len() < n {
        return Err(Error::Data(format!(
            "corpus has {} reviews, fewer than {n} folds",
            corpus.len()
        )));
    }
    let mut ids: Vec<&str> = corpus.reviews.iter().map(|r| r.id.as_str()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    let assignments = ids
        .into_iter()
        .enumerate()
        .map(|(i, id)| (id.to_string(), i % n))
        .collect();
    Ok(FoldPlan {
        n_folds: n,
        assignments,
        seed,
    })
}

/// Cross-validation outcome: pooled metrics plus per-fold detail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub metrics: Metrics,
    pub pooled: ConfusionMatrix,
    pub per_fold: Vec<ConfusionMatrix>,
}

/// Tag and stop-filter every review under one policy.
pub fn prepare_corpus(
    corpus: &LabeledCorpus,
    policy: &ScopePolicy,
    resources: &Resources,
) -> Vec<TokenizedReview> {
    corpus
        .reviews
        .iter()
        .map(|review| {
            let (tagged, _) = crate::tag_review(review, policy, resources);
            remove_stopwords(&tagged, &resources.stopwords)
        })
        .collect()
}

/// Run k-fold cross-validation for one (policy, classifier) condition. For
/// each fold the vocabulary, IDF, and model are built from the training
/// folds only; the held-out fold is vectorized against them and scored. The
/// pooled confusion matrix over all folds yields the reported metrics.
pub fn cross_validate(
    corpus: &LabeledCorpus,
    policy: &ScopePolicy,
    train_config: &TrainConfig,
    resources: &Resources,
    plan: &FoldPlan,
) -> Result<CvReport> {
    let prepared = prepare_corpus(corpus, policy, resources);
    cross_validate_prepared(&prepared, train_config, plan)
}

fn cross_validate_prepared(
    prepared: &[TokenizedReview],
    train_config: &TrainConfig,
    plan: &FoldPlan,
) -> Result<CvReport> {
    for review in prepared {
        match plan.fold_of(&review.id) {
            None => {
                return Err(Error::Data(format!(
                    "review {:?} is not covered by the fold plan",
                    review.id
                )))
            }
            Some(f) if f >= plan.n_folds => {
                return Err(Error::Data(format!(
                    "review {:?} assigned to fold {f} of {}",
                    review.id, plan.n_folds
                )))
            }
            Some(_) => {}
        }
    }

    let mut pooled = ConfusionMatrix::default();
    let mut per_fold = Vec::with_capacity(plan.n_folds);

    for fold in 0..plan.n_folds {
        let mut train_set: Vec<TokenizedReview> = Vec::new();
        let mut test_set: Vec<&TokenizedReview> = Vec::new();
        for review in prepared {
            if plan.fold_of(&review.id) == Some(fold) {
                test_set.push(review);
            } else {
                train_set.push(review.clone());
            }
        }
        if test_set.is_empty() {
            return Err(Error::Data(format!("fold {fold} has no test reviews")));
        }
        let train_labels: std::collections::BTreeSet<_> =
            train_set.iter().filter_map(|r| r.label).collect();
        if train_labels.len() < 2 {
            return Err(Error::Data(format!(
                "fold {fold} leaves a single-class training partition"
            )));
        }

        let vocab = build_vocabulary(&train_set)?;
        let idf = compute_idf(&vocab);
        let matrix = build_matrix(&train_set, &vocab, &idf)?;
        let model = train_model(&matrix, train_config)?;

        let mut cm = ConfusionMatrix::default();
        for review in test_set {
            let gold = review.label.ok_or_else(|| {
                Error::Data(format!("review {:?} is unlabeled", review.id))
            })?;
            let x = vectorize(review, &vocab, &idf);
            cm.count(predict_label(&model, &x), gold);
        }
        pooled.merge(&cm);
        per_fold.push(cm);
    }

    Ok(CvReport {
        metrics: compute_metrics(&pooled)?,
        pooled,
        per_fold,
    })
}

/// One cell of the comparison grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub policy: String,
    pub classifier: String,
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

/// Inputs pinned into a report so identical runs are recognizable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_digest: String,
    pub seed: u64,
}

/// The full policies × classifiers comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub grid: Vec<GridCell>,
    pub vocab_sizes: BTreeMap<String, usize>,
    pub stats: NegationStats,
    pub seed: u64,
    pub folds: usize,
    pub aggregation: String,
    pub provenance: Provenance,
}

/// Run every (policy, classifier) pair over one shared fold plan. Per-policy
/// vocabulary sizes are computed once on the full tagged corpus, mirroring
/// how feature counts are usually reported for such comparisons.
pub fn compare_grid(
    corpus: &LabeledCorpus,
    policies: &[ScopePolicy],
    classifiers: &[ClassifierKind],
    resources: &Resources,
    base_config: &TrainConfig,
    n_folds: usize,
    stratified: bool,
) -> Result<ComparisonReport> {
    if policies.is_empty() || classifiers.is_empty() {
        return Err(Error::Data("policies and classifiers must be nonempty".into()));
    }
    let seed = base_config.seed;
    let plan = if stratified {
        stratified_folds(corpus, n_folds, seed)?
    } else {
        unstratified_folds(corpus, n_folds, seed)?
    };

    let mut vocab_sizes = BTreeMap::new();
    let mut prepared_by_policy: Vec<(String, Vec<TokenizedReview>)> = Vec::new();
    for policy in policies {
        let prepared = prepare_corpus(corpus, policy, resources);
        let vocab = build_vocabulary(&prepared)?;
        vocab_sizes.insert(policy.kind.name().to_string(), vocab.len());
        prepared_by_policy.push((policy.kind.name().to_string(), prepared));
    }

    let mut grid = Vec::with_capacity(policies.len() * classifiers.len());
    for classifier in classifiers {
        for (policy_name, prepared) in &prepared_by_policy {
            let cell_config = TrainConfig {
                classifier: *classifier,
                ..base_config.clone()
            };
            let report = cross_validate_prepared(prepared, &cell_config, &plan)?;
            grid.push(GridCell {
                policy: policy_name.clone(),
                classifier: classifier.name().to_string(),
                accuracy: report.metrics.accuracy,
                precision: report.metrics.precision,
                recall: report.metrics.recall,
            });
        }
    }

    let stats = corpus_stats(corpus, &resources.negation, &resources.preprocess)?;

    Ok(ComparisonReport {
        grid,
        vocab_sizes,
        stats,
        seed,
        folds: n_folds,
        aggregation: "pooled".to_string(),
        provenance: Provenance {
            config_digest: resources.negation.digest(),
            seed,
        },
    })
}

fn fmt_pct(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{:.2}%", v * 100.0),
        None => "n/a".to_string(),
    }
}

/// Aligned text table, one row per (classifier, policy) cell, grouped by
/// classifier with accuracy/precision/recall columns.
pub fn render_comparison_table(report: &ComparisonReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<12} {:<10} {:>9} {:>10} {:>8}\n",
        "classifier", "policy", "accuracy", "precision", "recall"
    ));
    let mut last_classifier = "";
    for cell in &report.grid {
        let label = if cell.classifier == last_classifier {
            ""
        } else {
            last_classifier = &cell.classifier;
            &cell.classifier
        };
        out.push_str(&format!(
            "{:<12} {:<10} {:>9} {:>10} {:>8}\n",
            label,
            cell.policy,
            fmt_pct(Some(cell.accuracy)),
            fmt_pct(cell.precision),
            fmt_pct(cell.recall),
        ));
    }
    out.push('\n');
    let sizes: Vec<String> = report
        .vocab_sizes
        .iter()
        .map(|(p, n)| format!("{p}={n}"))
        .collect();
    out.push_str(&format!("vocabulary sizes: {}\n", sizes.join(" ")));
    out.push_str(&format!(
        "negation prevalence: {:.2}% ({}/{})\n",
        report.stats.prevalence * 100.0,
        report.stats.reviews_with_trigger,
        report.stats.total_reviews
    ));
    out.push_str(&format!(
        "aggregation: {} over {} folds, seed {}\n",
        report.aggregation, report.folds, report.seed
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{NegationConfig, Review, SentimentLexicon};
    use crate::negation::PolicyKind;
    use crate::preprocess::PreprocessOptions;
    use rand::Rng;
    use PolarityLabel::{Negative, Positive};

    fn balanced_corpus(n_per_class: usize) -> LabeledCorpus {
        let mut reviews = Vec::new();
        for i in 0..n_per_class {
            reviews.push(Review {
                id: format!("p{i}"),
                text: "مكان جميل".into(),
                label: Some(Positive),
            });
            reviews.push(Review {
                id: format!("n{i}"),
                text: "مكان وسخ".into(),
                label: Some(Negative),
            });
        }
        LabeledCorpus::from_reviews(reviews).unwrap()
    }

    fn plain_resources() -> Resources {
        Resources {
            negation: NegationConfig::with_triggers(["لا"]),
            lexicon: SentimentLexicon::default(),
            stopwords: Default::default(),
            preprocess: PreprocessOptions::default(),
        }
    }

    #[test]
    fn stratified_folds_are_balanced() {
        let corpus = balanced_corpus(10);
        let plan = stratified_folds(&corpus, 10, 7).unwrap();
        for fold in 0..10 {
            let ids: Vec<_> = corpus
                .reviews
                .iter()
                .filter(|r| plan.fold_of(&r.id) == Some(fold))
                .collect();
            assert_eq!(ids.len(), 2);
            let pos = ids.iter().filter(|r| r.label == Some(Positive)).count();
            assert_eq!(pos, 1);
        }
    }

    #[test]
    fn same_seed_same_plan() {
        let corpus = balanced_corpus(15);
        let a = stratified_folds(&corpus, 5, 3).unwrap();
        let b = stratified_folds(&corpus, 5, 3).unwrap();
        assert_eq!(a, b);
        let c = stratified_folds(&corpus, 5, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn large_balanced_corpus_splits_evenly() {
        let corpus = balanced_corpus(1200);
        let plan = stratified_folds(&corpus, 10, 1).unwrap();
        let mut fold_sizes = [0usize; 10];
        let mut fold_pos = [0usize; 10];
        for r in &corpus.reviews {
            let f = plan.fold_of(&r.id).unwrap();
            fold_sizes[f] += 1;
            if r.label == Some(Positive) {
                fold_pos[f] += 1;
            }
        }
        assert!(fold_sizes.iter().all(|&s| s == 240));
        assert!(fold_pos.iter().all(|&p| p == 120));
    }

    #[test]
    fn small_class_is_an_error() {
        let corpus = balanced_corpus(4);
        assert!(stratified_folds(&corpus, 10, 0).is_err());
    }

    #[test]
    fn confusion_perfect_and_all_positive() {
        let cm = confusion_matrix(&[Positive, Negative], &[Positive, Negative]).unwrap();
        assert_eq!(
            cm,
            ConfusionMatrix {
                true_pos: 1,
                true_neg: 1,
                false_pos: 0,
                false_neg: 0
            }
        );
        let cm = confusion_matrix(
            &[Positive, Positive, Positive],
            &[Positive, Negative, Negative],
        )
        .unwrap();
        assert_eq!(cm.true_pos, 1);
        assert_eq!(cm.false_pos, 2);
    }

    #[test]
    fn confusion_matches_brute_force_tally() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let draw = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.5) {
                Positive
            } else {
                Negative
            }
        };
        for _ in 0..50 {
            let n = rng.gen_range(1..40);
            let predicted: Vec<_> = (0..n).map(|_| draw(&mut rng)).collect();
            let gold: Vec<_> = (0..n).map(|_| draw(&mut rng)).collect();
            let cm = confusion_matrix(&predicted, &gold).unwrap();
            // independent tally
            let mut tp = 0;
            let mut tn = 0;
            let mut fp = 0;
            let mut fneg = 0;
            for i in 0..n {
                match (predicted[i], gold[i]) {
                    (Positive, Positive) => tp += 1,
                    (Negative, Negative) => tn += 1,
                    (Positive, Negative) => fp += 1,
                    (Negative, Positive) => fneg += 1,
                }
            }
            assert_eq!((cm.true_pos, cm.true_neg, cm.false_pos, cm.false_neg), (tp, tn, fp, fneg));
        }
    }

    #[test]
    fn confusion_length_mismatch() {
        assert!(confusion_matrix(&[Positive], &[Positive, Negative]).is_err());
    }

    #[test]
    fn metrics_arithmetic() {
        let cm = ConfusionMatrix {
            true_pos: 3,
            true_neg: 2,
            false_pos: 1,
            false_neg: 2,
        };
        let m = compute_metrics(&cm).unwrap();
        assert!((m.accuracy - 5.0 / 8.0).abs() < 1e-12);
        assert!((m.precision.unwrap() - 3.0 / 4.0).abs() < 1e-12);
        assert!((m.recall.unwrap() - 3.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn metrics_perfect() {
        let cm = ConfusionMatrix {
            true_pos: 1,
            true_neg: 1,
            false_pos: 0,
            false_neg: 0,
        };
        let m = compute_metrics(&cm).unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.precision, Some(1.0));
        assert_eq!(m.recall, Some(1.0));
    }

    #[test]
    fn precision_absent_when_undefined() {
        let cm = ConfusionMatrix {
            true_pos: 0,
            true_neg: 3,
            false_pos: 0,
            false_neg: 2,
        };
        let m = compute_metrics(&cm).unwrap();
        assert_eq!(m.precision, None);
        assert!(m.recall.is_some());
    }

    #[test]
    fn all_zero_matrix_is_an_error() {
        assert!(compute_metrics(&ConfusionMatrix::default()).is_err());
    }

    #[test]
    fn separable_corpus_reaches_full_accuracy() {
        let corpus = balanced_corpus(10);
        let resources = plain_resources();
        let plan = stratified_folds(&corpus, 5, 2).unwrap();
        let report = cross_validate(
            &corpus,
            &ScopePolicy::new(PolicyKind::None),
            &TrainConfig::with_seed(ClassifierKind::Svm, 2),
            &resources,
            &plan,
        )
        .unwrap();
        assert_eq!(report.metrics.accuracy, 1.0);
        assert_eq!(report.pooled.total(), corpus.len());
        assert_eq!(report.per_fold.len(), 5);
    }

    #[test]
    fn cross_validate_is_deterministic() {
        let corpus = balanced_corpus(8);
        let resources = plain_resources();
        let plan = stratified_folds(&corpus, 4, 5).unwrap();
        let run = || {
            cross_validate(
                &corpus,
                &ScopePolicy::new(PolicyKind::None),
                &TrainConfig::with_seed(ClassifierKind::Logreg, 5),
                &resources,
                &plan,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn single_class_training_partition_is_an_error() {
        let corpus = balanced_corpus(3);
        let resources = plain_resources();
        // all negatives in fold 0: training for fold 0 sees positives only
        let mut assignments = HashMap::new();
        for r in &corpus.reviews {
            let fold = if r.label == Some(Negative) { 0 } else { 1 };
            assignments.insert(r.id.clone(), fold);
        }
        let plan = FoldPlan {
            n_folds: 2,
            assignments,
            seed: 0,
        };
        let err = cross_validate(
            &corpus,
            &ScopePolicy::new(PolicyKind::None),
            &TrainConfig::with_seed(ClassifierKind::Svm, 0),
            &resources,
            &plan,
        )
        .unwrap_err();
        assert!(err.to_string().contains("single-class"), "got {err}");
    }

    #[test]
    fn unseen_test_words_cannot_change_the_outcome() {
        // two corpora identical on fold-0 training data; their fold-1 texts
        // use words never seen in training, permuted differently
        let build = |suffixes: [&str; 2]| {
            LabeledCorpus::from_reviews(vec![
                Review { id: "a".into(), text: "مكان جميل".into(), label: Some(Positive) },
                Review { id: "b".into(), text: "مكان وسخ".into(), label: Some(Negative) },
                Review { id: "c".into(), text: "مكان جميل".into(), label: Some(Positive) },
                Review { id: "d".into(), text: "مكان وسخ".into(), label: Some(Negative) },
                Review { id: "e".into(), text: suffixes[0].into(), label: Some(Positive) },
                Review { id: "f".into(), text: suffixes[1].into(), label: Some(Negative) },
            ])
            .unwrap()
        };
        let corpus_a = build(["غريب اول", "غريب ثاني"]);
        let corpus_b = build(["غريب ثاني", "غريب اول"]);
        let mut assignments = HashMap::new();
        for id in ["a", "b", "c", "d"] {
            assignments.insert(id.to_string(), 0);
        }
        for id in ["e", "f"] {
            assignments.insert(id.to_string(), 1);
        }
        let plan = FoldPlan { n_folds: 2, assignments, seed: 0 };
        let resources = plain_resources();
        let run = |corpus: &LabeledCorpus| {
            cross_validate(
                corpus,
                &ScopePolicy::new(PolicyKind::None),
                &TrainConfig::with_seed(ClassifierKind::Svm, 1),
                &resources,
                &plan,
            )
            .unwrap()
        };
        assert_eq!(run(&corpus_a), run(&corpus_b));
    }

    #[test]
    fn grid_covers_the_cross_product() {
        let corpus = balanced_corpus(6);
        let resources = plain_resources();
        let policies: Vec<ScopePolicy> = PolicyKind::all().map(ScopePolicy::new).to_vec();
        let classifiers = ClassifierKind::all();
        let report = compare_grid(
            &corpus,
            &policies,
            &classifiers,
            &resources,
            &TrainConfig::with_seed(ClassifierKind::Svm, 11),
            3,
            true,
        )
        .unwrap();
        assert_eq!(report.grid.len(), 16);
        assert_eq!(report.vocab_sizes.len(), 4);
        // classifier-major layout
        assert_eq!(report.grid[0].classifier, "svm");
        assert_eq!(report.grid[0].policy, "none");
        assert_eq!(report.grid[3].classifier, "svm");
        assert_eq!(report.grid[4].classifier, "nb");
        let table = render_comparison_table(&report);
        assert!(table.contains("classifier"));
        assert!(table.contains("vocabulary sizes"));
        let json = serde_json::to_string(&report).unwrap();
        let parsed: ComparisonReport = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn vocab_never_shrinks_under_tagging() {
        // a corpus where لا precedes lexicon words sometimes
        let corpus = LabeledCorpus::from_reviews(vec![
            Review { id: "a".into(), text: "لا احب المكان وسخ".into(), label: Some(Negative) },
            Review { id: "b".into(), text: "احب المكان جميل".into(), label: Some(Positive) },
            Review { id: "c".into(), text: "لا شي هنا جميل".into(), label: Some(Negative) },
            Review { id: "d".into(), text: "جميل ورايق".into(), label: Some(Positive) },
        ])
        .unwrap();
        let resources = Resources {
            negation: NegationConfig::with_triggers(["لا"]),
            lexicon: SentimentLexicon::from_entries([
                ("احب".to_string(), Positive),
                ("جميل".to_string(), Positive),
                ("وسخ".to_string(), Negative),
            ])
            .unwrap(),
            stopwords: Default::default(),
            preprocess: PreprocessOptions::default(),
        };
        let report = compare_grid(
            &corpus,
            &PolicyKind::all().map(ScopePolicy::new),
            &[ClassifierKind::Nb],
            &resources,
            &TrainConfig::with_seed(ClassifierKind::Nb, 0),
            2,
            true,
        )
        .unwrap();
        let none = report.vocab_sizes["none"];
        for policy in ["window", "sentence", "rules"] {
            assert!(report.vocab_sizes[policy] >= none, "{policy} shrank");
        }
    }
}
