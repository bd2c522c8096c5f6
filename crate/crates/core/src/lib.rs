//! Negation-aware sentiment classification for colloquial Arabic reviews.
//!
//! The pipeline: load resources ([`corpus`]), normalize and tokenize text
//! ([`preprocess`]), tag negation scopes with the rule engine or a baseline
//! policy ([`negation`]), turn tagged tokens into unigram TF-IDF vectors
//! ([`features`]), train and apply one of four classifiers ([`classify`]),
//! and compare policies × classifiers under stratified cross-validation
//! ([`evaluate`]). [`synthetic`] generates the planted-negation benchmark
//! corpus used by the acceptance suite and benches.

pub mod classify;
pub mod corpus;
pub mod digest;
pub mod error;
pub mod evaluate;
pub mod features;
pub mod negation;
pub mod preprocess;
pub mod synthetic;

pub use classify::{ClassifierKind, TrainConfig, TrainedModel};
pub use corpus::{
    CorpusFormat, LabeledCorpus, NegationConfig, NegationStats, PolarityLabel, Review,
    SentimentLexicon,
};
pub use error::{Error, Result};
pub use evaluate::{ComparisonReport, ConfusionMatrix, CvReport, FoldPlan, Metrics};
pub use negation::{PolicyKind, RuleTrace, ScopePolicy};
pub use preprocess::{PreprocessOptions, Token, TokenizedReview};

use std::collections::HashSet;

/// The loaded resource bundle every pipeline stage reads from. Immutable
/// after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct Resources {
    pub negation: NegationConfig,
    pub lexicon: SentimentLexicon,
    pub stopwords: HashSet<String>,
    pub preprocess: PreprocessOptions,
}

impl Resources {
    /// Built-in defaults: the shipped negation config and stop-word list,
    /// with an empty lexicon (the rule engine then never tags).
    pub fn builtin() -> Self {
        let run = corpus::default_run_config();
        let stopwords = corpus::default_stopwords(&run.preprocess);
        Resources {
            negation: run.negation,
            lexicon: SentimentLexicon::default(),
            stopwords,
            preprocess: run.preprocess,
        }
    }
}

/// Preprocess one raw review and tag it under the given policy. Stop-word
/// removal is a featurization step and is not applied here.
pub fn tag_review(
    review: &Review,
    policy: &ScopePolicy,
    resources: &Resources,
) -> (TokenizedReview, Option<RuleTrace>) {
    let tokenized = preprocess::preprocess_review(review, &resources.preprocess);
    negation::apply_policy(&tokenized, policy, &resources.negation, &resources.lexicon)
}
