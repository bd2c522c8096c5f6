//! KNN over cosine similarity. Rows are unit-normalized by the featurizer,
//! so cosine similarity is a plain dot product.

use crate::corpus::PolarityLabel;
use crate::error::{Error, Result};
use crate::features::{DocumentTermMatrix, SparseVector};

/// Stored training rows plus the neighbor count (capped at the row count).
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    pub rows: Vec<SparseVector>,
    pub labels: Vec<PolarityLabel>,
    pub k: usize,
}

impl KnnModel {
    pub fn fit(matrix: &DocumentTermMatrix, k: usize) -> Result<Self> {
        if matrix.is_empty() {
            return Err(Error::Train("knn needs a nonempty training matrix".into()));
        }
        if k < 1 {
            return Err(Error::Train("k_neighbors must be at least 1".into()));
        }
        Ok(KnnModel {
            rows: matrix.rows.clone(),
            labels: matrix.labels.clone(),
            k: k.min(matrix.len()),
        })
    }
}

/// Majority label among the k nearest training rows. A vote tie goes to the
/// side with the larger summed similarity; a persisting tie is positive.
/// Equal similarities rank by training-row order, keeping selection
/// deterministic.
pub fn knn_predict(model: &KnnModel, x: &SparseVector) -> PolarityLabel {
    let mut sims: Vec<(f64, usize)> = model
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| (row.dot(x), i))
        .collect();
    sims.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let mut pos_votes = 0usize;
    let mut neg_votes = 0usize;
    let mut pos_sim = 0.0f64;
    let mut neg_sim = 0.0f64;
    for &(sim, idx) in sims.iter().take(model.k) {
        match model.labels[idx] {
            PolarityLabel::Positive => {
                pos_votes += 1;
                pos_sim += sim;
            }
            PolarityLabel::Negative => {
                neg_votes += 1;
                neg_sim += sim;
            }
        }
    }

    if pos_votes != neg_votes {
        if pos_votes > neg_votes {
            PolarityLabel::Positive
        } else {
            PolarityLabel::Negative
        }
    } else if pos_sim != neg_sim {
        if pos_sim > neg_sim {
            PolarityLabel::Positive
        } else {
            PolarityLabel::Negative
        }
    } else {
        PolarityLabel::Positive
    }
}
