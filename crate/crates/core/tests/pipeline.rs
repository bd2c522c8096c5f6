//! Cross-module integration: corpus round-trips, the full tag-and-featurize
//! pipeline on the shipped fixture, and model persistence through real files.

use std::path::{Path, PathBuf};

use proptest::prelude::*;

use negscope_core::classify::{
    load_model, predict_label, save_model, train_model, ClassifierKind, TrainConfig,
};
use negscope_core::corpus::{
    default_run_config, load_corpus, load_sentiment_lexicon, write_corpus_jsonl, write_corpus_tsv,
    CorpusFormat, LabeledCorpus, Review,
};
use negscope_core::evaluate::prepare_corpus;
use negscope_core::features::{build_matrix, build_vocabulary, compute_idf, vectorize};
use negscope_core::negation::{PolicyKind, ScopePolicy};
use negscope_core::{PolarityLabel, Resources};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn fixture_resources() -> Resources {
    let run = default_run_config();
    let lexicon = load_sentiment_lexicon(&fixture("lexicon.tsv"), &run.preprocess).unwrap();
    Resources {
        negation: run.negation,
        lexicon,
        stopwords: negscope_core::corpus::default_stopwords(&run.preprocess),
        preprocess: run.preprocess,
    }
}

#[test]
fn fixture_pipeline_vocab_growth_and_training() {
    let corpus = load_corpus(&fixture("corpus.tsv"), CorpusFormat::Tsv).unwrap();
    let resources = fixture_resources();

    let vocab_size = |kind: PolicyKind| {
        let prepared = prepare_corpus(&corpus, &ScopePolicy::new(kind), &resources);
        build_vocabulary(&prepared).unwrap().len()
    };
    let baseline = vocab_size(PolicyKind::None);
    for kind in [
        PolicyKind::FixedWindow,
        PolicyKind::ToSentenceEnd,
        PolicyKind::RuleBased,
    ] {
        assert!(
            vocab_size(kind) >= baseline,
            "{} vocabulary shrank below the untagged one",
            kind.name()
        );
    }

    // train on the rule-tagged fixture and persist through a real file
    let prepared = prepare_corpus(&corpus, &ScopePolicy::new(PolicyKind::RuleBased), &resources);
    let vocab = build_vocabulary(&prepared).unwrap();
    let idf = compute_idf(&vocab);
    let matrix = build_matrix(&prepared, &vocab, &idf).unwrap();
    let model = train_model(&matrix, &TrainConfig::with_seed(ClassifierKind::Logreg, 3)).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.txt");
    save_model(&model, &path, &["fixture training run".into()]).unwrap();
    let loaded = load_model(&path).unwrap();
    for review in &prepared {
        let x = vectorize(review, &vocab, &idf);
        assert_eq!(predict_label(&model, &x), predict_label(&loaded, &x));
    }
}

fn arb_corpus() -> impl Strategy<Value = LabeledCorpus> {
    let word = prop::sample::select(vec![
        "مكان", "جميل", "وسخ", "لا", "ما", "يوم", "ناس", "حلو", "شي", "بيت",
    ]);
    let text = prop::collection::vec(word, 1..6).prop_map(|ws| ws.join(" "));
    let label = prop::option::of(prop::bool::ANY.prop_map(|b| {
        if b {
            PolarityLabel::Positive
        } else {
            PolarityLabel::Negative
        }
    }));
    prop::collection::vec((text, label), 0..12).prop_map(|rows| {
        let reviews: Vec<Review> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (text, label))| Review {
                id: format!("r{i}"),
                text,
                label,
            })
            .collect();
        LabeledCorpus::from_reviews(reviews).unwrap()
    })
}

proptest! {
    #[test]
    fn corpus_round_trips_through_both_formats(corpus in arb_corpus()) {
        let dir = tempfile::tempdir().unwrap();

        let tsv_path = dir.path().join("c.tsv");
        let mut buf = Vec::new();
        write_corpus_tsv(&mut buf, &corpus).unwrap();
        std::fs::write(&tsv_path, &buf).unwrap();
        let reloaded = load_corpus(&tsv_path, CorpusFormat::Tsv).unwrap();
        prop_assert_eq!(&reloaded, &corpus);

        let jsonl_path = dir.path().join("c.jsonl");
        let mut buf = Vec::new();
        write_corpus_jsonl(&mut buf, &corpus).unwrap();
        std::fs::write(&jsonl_path, &buf).unwrap();
        let reloaded = load_corpus(&jsonl_path, CorpusFormat::Jsonl).unwrap();
        prop_assert_eq!(&reloaded, &corpus);
    }
}
