//! Pipeline benchmarks over the planted synthetic corpus: preprocessing,
//! rule tagging, vectorization, and SVM training.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use negscope_core::classify::{train_svm_linear, ClassifierKind, TrainConfig};
use negscope_core::evaluate::prepare_corpus;
use negscope_core::features::{build_matrix, build_vocabulary, compute_idf, vectorize};
use negscope_core::negation::{tag_rule_based, PolicyKind, ScopePolicy};
use negscope_core::preprocess::preprocess_review;
use negscope_core::synthetic::generate_planted_corpus;

fn bench_preprocess(c: &mut Criterion) {
    let planted = generate_planted_corpus(400, 17).unwrap();
    let resources = planted.resources();
    c.bench_function("preprocess 400 reviews", |b| {
        b.iter(|| {
            for review in &planted.corpus.reviews {
                black_box(preprocess_review(review, &resources.preprocess));
            }
        })
    });
}

fn bench_rule_tagging(c: &mut Criterion) {
    let planted = generate_planted_corpus(400, 17).unwrap();
    let resources = planted.resources();
    let tokenized: Vec<_> = planted
        .corpus
        .reviews
        .iter()
        .map(|r| preprocess_review(r, &resources.preprocess))
        .collect();
    c.bench_function("rule-tag 400 reviews", |b| {
        b.iter(|| {
            for review in &tokenized {
                black_box(tag_rule_based(
                    review,
                    &resources.negation,
                    &resources.lexicon,
                ));
            }
        })
    });
}

fn bench_vectorize(c: &mut Criterion) {
    let planted = generate_planted_corpus(400, 17).unwrap();
    let resources = planted.resources();
    let prepared = prepare_corpus(
        &planted.corpus,
        &ScopePolicy::new(PolicyKind::RuleBased),
        &resources,
    );
    let vocab = build_vocabulary(&prepared).unwrap();
    let idf = compute_idf(&vocab);
    c.bench_function("vectorize 400 reviews", |b| {
        b.iter(|| {
            for review in &prepared {
                black_box(vectorize(review, &vocab, &idf));
            }
        })
    });
}

fn bench_svm_training(c: &mut Criterion) {
    let planted = generate_planted_corpus(400, 17).unwrap();
    let resources = planted.resources();
    let prepared = prepare_corpus(
        &planted.corpus,
        &ScopePolicy::new(PolicyKind::RuleBased),
        &resources,
    );
    let vocab = build_vocabulary(&prepared).unwrap();
    let idf = compute_idf(&vocab);
    let matrix = build_matrix(&prepared, &vocab, &idf).unwrap();
    let config = TrainConfig::with_seed(ClassifierKind::Svm, 17);
    c.bench_function("svm train 400 reviews, 100 epochs", |b| {
        b.iter(|| black_box(train_svm_linear(&matrix, &config).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_preprocess,
    bench_rule_tagging,
    bench_vectorize,
    bench_svm_training
);
criterion_main!(benches);
