//! Generator for the planted-negation benchmark corpus.
//!
//! Each review carries exactly one opinion word from a small lexicon. The
//! gold label equals that word's polarity, flipped when the planted trigger
//! precedes the word within five tokens. A quarter of the reviews are
//! negated this way. Under rule-based tagging the negated occurrences become
//! distinct `w_!` features and the classes are linearly separable; untagged,
//! the label of a negated review contradicts its opinion word, which no
//! linear model over unigram features can represent.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{LabeledCorpus, NegationConfig, PolarityLabel, Review, SentimentLexicon};
use crate::error::{Error, Result};
use crate::preprocess::PreprocessOptions;
use crate::Resources;

const TRIGGER: &str = "مش";

const POSITIVE_OPINIONS: [&str; 6] = ["حلو", "جميل", "ممتاز", "رايع", "نظيف", "لطيف"];
const NEGATIVE_OPINIONS: [&str; 6] = ["وسخ", "مزعج", "بشع", "غالي", "قذر", "مقرف"];

const FILLERS: [&str; 20] = [
    "مكان", "يوم", "ناس", "سوق", "بيت", "طعام", "شارع", "مدينه", "صباح", "مساء",
    "باب", "شباك", "طريق", "جبل", "بحر", "نهر", "قمر", "شمس", "ارض", "سما",
];

/// A generated corpus bundled with the resources that make it meaningful.
#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub corpus: LabeledCorpus,
    pub lexicon: SentimentLexicon,
    pub config: NegationConfig,
    /// Fraction of reviews carrying the planted trigger; exact by
    /// construction.
    pub planted_rate: f64,
}

impl PlantedCorpus {
    /// Resource bundle for the pipeline: the planted trigger and lexicon, no
    /// stop words, default preprocessing.
    pub fn resources(&self) -> Resources {
        Resources {
            negation: self.config.clone(),
            lexicon: self.lexicon.clone(),
            stopwords: HashSet::new(),
            preprocess: PreprocessOptions::default(),
        }
    }
}

/// Generate `n_reviews` planted reviews (divisible by 8 so that labels stay
/// exactly balanced with a quarter negated), deterministically from the seed.
pub fn generate_planted_corpus(n_reviews: usize, seed: u64) -> Result<PlantedCorpus> {
    if n_reviews == 0 || !n_reviews.is_multiple_of(8) {
        return Err(Error::Data(format!(
            "planted corpus size must be a positive multiple of 8, got {n_reviews}"
        )));
    }
    let negated_per_polarity = n_reviews / 8;
    let clean_per_polarity = 3 * n_reviews / 8;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drafts: Vec<(String, PolarityLabel)> = Vec::with_capacity(n_reviews);

    let blocks = [
        (clean_per_polarity, PolarityLabel::Positive, false),
        (clean_per_polarity, PolarityLabel::Negative, false),
        (negated_per_polarity, PolarityLabel::Positive, true),
        (negated_per_polarity, PolarityLabel::Negative, true),
    ];
    for (count, opinion_polarity, negated) in blocks {
        for _ in 0..count {
            let opinion = match opinion_polarity {
                PolarityLabel::Positive => POSITIVE_OPINIONS[rng.gen_range(0..6)],
                PolarityLabel::Negative => NEGATIVE_OPINIONS[rng.gen_range(0..6)],
            };
            let mut tokens: Vec<&str> = Vec::new();
            for _ in 0..rng.gen_range(0..=3usize) {
                tokens.push(FILLERS[rng.gen_range(0..FILLERS.len())]);
            }
            if negated {
                tokens.push(TRIGGER);
                // keep the opinion word within the five-token scope
                for _ in 0..rng.gen_range(0..=4usize) {
                    tokens.push(FILLERS[rng.gen_range(0..FILLERS.len())]);
                }
            }
            tokens.push(opinion);
            for _ in 0..rng.gen_range(0..=3usize) {
                tokens.push(FILLERS[rng.gen_range(0..FILLERS.len())]);
            }
            let label = if negated {
                opinion_polarity.opposite()
            } else {
                opinion_polarity
            };
            drafts.push((tokens.join(" "), label));
        }
    }

    drafts.shuffle(&mut rng);
    let reviews: Vec<Review> = drafts
        .into_iter()
        .enumerate()
        .map(|(i, (text, label))| Review {
            id: format!("r{:04}", i + 1),
            text,
            label: Some(label),
        })
        .collect();

    let lexicon = SentimentLexicon::from_entries(
        POSITIVE_OPINIONS
            .iter()
            .map(|w| (w.to_string(), PolarityLabel::Positive))
            .chain(
                NEGATIVE_OPINIONS
                    .iter()
                    .map(|w| (w.to_string(), PolarityLabel::Negative)),
            ),
    )?;

    Ok(PlantedCorpus {
        corpus: LabeledCorpus::from_reviews(reviews)?,
        lexicon,
        config: NegationConfig::with_triggers([TRIGGER]),
        planted_rate: 0.25,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus_stats;
    use crate::negation::{PolicyKind, ScopePolicy};
    use crate::preprocess::preprocess_review;

    #[test]
    fn corpus_is_balanced_with_exact_planted_rate() {
        let planted = generate_planted_corpus(400, 7).unwrap();
        assert_eq!(planted.corpus.len(), 400);
        assert_eq!(planted.corpus.class_count(PolarityLabel::Positive), 200);
        assert_eq!(planted.corpus.class_count(PolarityLabel::Negative), 200);
        let stats = corpus_stats(
            &planted.corpus,
            &planted.config,
            &PreprocessOptions::default(),
        )
        .unwrap();
        assert_eq!(stats.reviews_with_trigger, 100);
        assert_eq!(stats.prevalence, 0.25);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_planted_corpus(80, 3).unwrap();
        let b = generate_planted_corpus(80, 3).unwrap();
        assert_eq!(a.corpus, b.corpus);
        let c = generate_planted_corpus(80, 4).unwrap();
        assert_ne!(a.corpus, c.corpus);
    }

    #[test]
    fn size_must_be_multiple_of_eight() {
        assert!(generate_planted_corpus(50, 0).is_err());
        assert!(generate_planted_corpus(0, 0).is_err());
    }

    #[test]
    fn labels_follow_the_planting_rule() {
        let planted = generate_planted_corpus(160, 11).unwrap();
        let resources = planted.resources();
        for review in &planted.corpus.reviews {
            let tokenized = preprocess_review(review, &resources.preprocess);
            let opinion: Vec<_> = tokenized
                .tokens
                .iter()
                .filter(|t| planted.lexicon.contains(&t.surface))
                .collect();
            assert_eq!(opinion.len(), 1, "exactly one opinion word per review");
            let polarity = planted.lexicon.polarity_of(&opinion[0].surface).unwrap();
            let has_trigger = tokenized.tokens.iter().any(|t| t.surface == TRIGGER);
            let expected = if has_trigger {
                polarity.opposite()
            } else {
                polarity
            };
            assert_eq!(review.label, Some(expected), "review {}", review.id);
        }
    }

    #[test]
    fn rule_engine_tags_exactly_the_negated_opinions() {
        let planted = generate_planted_corpus(160, 13).unwrap();
        let resources = planted.resources();
        let policy = ScopePolicy::new(PolicyKind::RuleBased);
        for review in &planted.corpus.reviews {
            let (tagged, _) = crate::tag_review(review, &policy, &resources);
            let negated: Vec<_> = tagged.tokens.iter().filter(|t| t.negated).collect();
            let has_trigger = tagged.tokens.iter().any(|t| t.surface == TRIGGER);
            if has_trigger {
                assert_eq!(negated.len(), 1, "review {}", review.id);
                assert!(planted.lexicon.contains(&negated[0].surface));
            } else {
                assert!(negated.is_empty(), "review {}", review.id);
            }
        }
    }
}
