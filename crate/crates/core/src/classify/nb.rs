//! Multinomial Naive Bayes over TF-IDF weights treated as fractional counts.

use std::collections::BTreeMap;

use crate::corpus::PolarityLabel;
use crate::error::{Error, Result};
use crate::features::{DocumentTermMatrix, SparseVector};

const LABELS: [PolarityLabel; 2] = [PolarityLabel::Positive, PolarityLabel::Negative];

#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    pub class_log_prior: BTreeMap<PolarityLabel, f64>,
    pub feature_log_likelihood: BTreeMap<PolarityLabel, Vec<f64>>,
}

impl NbModel {
    pub fn n_features(&self) -> usize {
        self.feature_log_likelihood
            .values()
            .next()
            .map(|v| v.len())
            .unwrap_or(0)
    }
}

/// Smoothed multinomial fit:
/// likelihood(t|c) = (α + Σ weight of t in class c) / (α·|V| + Σ all weights in c).
pub fn train_nb(matrix: &DocumentTermMatrix, alpha: f64) -> Result<NbModel> {
    if alpha <= 0.0 {
        return Err(Error::Train("nb_alpha must be positive".into()));
    }
    let n_features = matrix.n_features;
    let n_rows = matrix.len();

    let mut class_counts: BTreeMap<PolarityLabel, usize> = BTreeMap::new();
    let mut sums: BTreeMap<PolarityLabel, Vec<f64>> = BTreeMap::new();
    for label in LABELS {
        sums.insert(label, vec![0.0; n_features]);
        class_counts.insert(label, 0);
    }
    for (row, label) in matrix.rows.iter().zip(&matrix.labels) {
        *class_counts.get_mut(label).unwrap() += 1;
        let class_sums = sums.get_mut(label).unwrap();
        for &(idx, w) in row.entries() {
            class_sums[idx] += w;
        }
    }
    for label in LABELS {
        if class_counts[&label] == 0 {
            return Err(Error::Train(format!(
                "class {label} has no training rows"
            )));
        }
    }

    let mut class_log_prior = BTreeMap::new();
    let mut feature_log_likelihood = BTreeMap::new();
    for label in LABELS {
        class_log_prior.insert(label, (class_counts[&label] as f64 / n_rows as f64).ln());
        let class_sums = &sums[&label];
        let total: f64 = class_sums.iter().sum();
        let denom = alpha * n_features as f64 + total;
        feature_log_likelihood.insert(
            label,
            class_sums.iter().map(|&s| ((alpha + s) / denom).ln()).collect(),
        );
    }

    Ok(NbModel {
        class_log_prior,
        feature_log_likelihood,
    })
}

/// Posterior ∝ exp(log prior + Σ weight · log likelihood), normalized with a
/// log-sum-exp. An exact score tie goes to the positive class.
pub fn predict_nb(model: &NbModel, x: &SparseVector) -> (PolarityLabel, BTreeMap<PolarityLabel, f64>) {
    let mut scores = BTreeMap::new();
    for label in LABELS {
        let loglik = &model.feature_log_likelihood[&label];
        let mut score = model.class_log_prior[&label];
        for &(idx, w) in x.entries() {
            score += w * loglik[idx];
        }
        scores.insert(label, score);
    }

    let max = scores.values().cloned().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = scores.values().map(|&s| (s - max).exp()).sum();
    let posterior: BTreeMap<PolarityLabel, f64> = scores
        .iter()
        .map(|(&label, &s)| (label, (s - max).exp() / z))
        .collect();

    let label = if scores[&PolarityLabel::Positive] >= scores[&PolarityLabel::Negative] {
        PolarityLabel::Positive
    } else {
        PolarityLabel::Negative
    };
    (label, posterior)
}
