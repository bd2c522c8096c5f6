//! Linear models: hinge-loss subgradient SVM and full-batch logistic
//! regression, sharing one dense weight representation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::PolarityLabel;
use crate::error::{Error, Result};
use crate::features::{DocumentTermMatrix, SparseVector};

use super::TrainConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearKind {
    Svm,
    Logreg,
}

impl LinearKind {
    pub fn name(self) -> &'static str {
        match self {
            LinearKind::Svm => "svm",
            LinearKind::Logreg => "logreg",
        }
    }
}

/// Dense weight vector over the training vocabulary plus a bias.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub kind: LinearKind,
}

impl LinearModel {
    pub fn score(&self, x: &SparseVector) -> f64 {
        let mut s = self.bias;
        for &(idx, w) in x.entries() {
            s += self.weights[idx] * w;
        }
        s
    }

    fn check_finite(&self) -> Result<()> {
        if !self.bias.is_finite() || self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Train("non-finite weights".into()));
        }
        Ok(())
    }
}

fn signed(label: PolarityLabel) -> f64 {
    match label {
        PolarityLabel::Positive => 1.0,
        PolarityLabel::Negative => -1.0,
    }
}

/// score > 0 means positive, score < 0 negative; an exact zero resolves to
/// positive.
pub fn predict_linear(model: &LinearModel, x: &SparseVector) -> (PolarityLabel, f64) {
    let score = model.score(x);
    let label = if score >= 0.0 {
        PolarityLabel::Positive
    } else {
        PolarityLabel::Negative
    };
    (label, score)
}

/// Hinge objective used by the SVM trainer and its tests:
/// Σ max(0, 1 − y·(w·x + b)) + ‖w‖² / (2C).
pub fn svm_objective(matrix: &DocumentTermMatrix, weights: &[f64], bias: f64, c: f64) -> f64 {
    let mut hinge = 0.0;
    for (row, &label) in matrix.rows.iter().zip(&matrix.labels) {
        let mut score = bias;
        for &(idx, w) in row.entries() {
            score += weights[idx] * w;
        }
        hinge += (1.0 - signed(label) * score).max(0.0);
    }
    let norm_sq: f64 = weights.iter().map(|w| w * w).sum();
    hinge + norm_sq / (2.0 * c)
}

/// Epoch-wise subgradient descent on the hinge objective with seeded
/// shuffling. Subgradient steps are not descent steps, so the iterate with
/// the lowest objective seen at any epoch boundary is the one returned. The
/// weight vector is kept as `scale · values` so the regularization shrink
/// costs O(1) per step instead of O(|V|).
pub fn train_svm_linear(matrix: &DocumentTermMatrix, config: &TrainConfig) -> Result<LinearModel> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::Train("cannot train on an empty matrix".into()));
    }
    // mean-form regularizer matching Σ hinge + ‖w‖²/(2C)
    let lambda = 1.0 / (config.svm_c * n as f64);
    let mut values = vec![0.0f64; matrix.n_features];
    let mut scale = 1.0f64;
    let mut bias = 0.0f64;

    let mut best_weights = vec![0.0f64; matrix.n_features];
    let mut best_bias = 0.0f64;
    let mut best_objective = svm_objective(matrix, &best_weights, best_bias, config.svm_c);

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    for epoch in 0..config.epochs {
        // harmonic decay keeps early steps bounded and still sums to infinity
        let eta = 0.5 / (1.0 + epoch as f64);
        order.shuffle(&mut rng);
        for &i in &order {
            let row = &matrix.rows[i];
            let y = signed(matrix.labels[i]);
            let mut score = bias;
            for &(idx, w) in row.entries() {
                score += scale * values[idx] * w;
            }
            scale *= 1.0 - eta * lambda;
            if y * score < 1.0 {
                for &(idx, w) in row.entries() {
                    values[idx] += eta * y * w / scale;
                }
                bias += eta * y;
            }
            if scale < 1e-9 {
                for v in values.iter_mut() {
                    *v *= scale;
                }
                scale = 1.0;
            }
        }

        let weights: Vec<f64> = values.iter().map(|v| v * scale).collect();
        let objective = svm_objective(matrix, &weights, bias, config.svm_c);
        if objective < best_objective {
            best_objective = objective;
            best_weights = weights;
            best_bias = bias;
        }
    }

    let model = LinearModel {
        weights: best_weights,
        bias: best_bias,
        kind: LinearKind::Svm,
    };
    model.check_finite()?;
    Ok(model)
}

/// L2-regularized negative log-likelihood of a logistic model, mean over
/// rows; probabilities are clamped away from 0 and 1 for the log only.
pub fn logreg_loss(matrix: &DocumentTermMatrix, weights: &[f64], bias: f64, l2: f64) -> f64 {
    let n = matrix.len() as f64;
    let mut nll = 0.0;
    for (row, &label) in matrix.rows.iter().zip(&matrix.labels) {
        let mut score = bias;
        for &(idx, w) in row.entries() {
            score += weights[idx] * w;
        }
        let p = sigmoid(score).clamp(1e-12, 1.0 - 1e-12);
        let y = match label {
            PolarityLabel::Positive => 1.0,
            PolarityLabel::Negative => 0.0,
        };
        nll -= y * p.ln() + (1.0 - y) * (1.0 - p).ln();
    }
    let norm_sq: f64 = weights.iter().map(|w| w * w).sum();
    nll / n + 0.5 * l2 * norm_sq
}

/// Analytic gradient of `logreg_loss` in (weights, bias).
pub fn logreg_gradient(
    matrix: &DocumentTermMatrix,
    weights: &[f64],
    bias: f64,
    l2: f64,
) -> (Vec<f64>, f64) {
    let n = matrix.len() as f64;
    let mut grad = vec![0.0f64; weights.len()];
    let mut grad_bias = 0.0f64;
    for (row, &label) in matrix.rows.iter().zip(&matrix.labels) {
        let mut score = bias;
        for &(idx, w) in row.entries() {
            score += weights[idx] * w;
        }
        let p = sigmoid(score);
        let y = match label {
            PolarityLabel::Positive => 1.0,
            PolarityLabel::Negative => 0.0,
        };
        let err = p - y;
        for &(idx, w) in row.entries() {
            grad[idx] += err * w;
        }
        grad_bias += err;
    }
    for (g, w) in grad.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    (grad, grad_bias / n)
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Full-batch gradient descent from zero initialization, deterministic.
pub fn train_logreg(matrix: &DocumentTermMatrix, config: &TrainConfig) -> Result<LinearModel> {
    if matrix.is_empty() {
        return Err(Error::Train("cannot train on an empty matrix".into()));
    }
    let mut weights = vec![0.0f64; matrix.n_features];
    let mut bias = 0.0f64;

    for _ in 0..config.epochs {
        let (grad, grad_bias) = logreg_gradient(matrix, &weights, bias, config.logreg_l2);
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= config.logreg_learning_rate * g;
        }
        bias -= config.logreg_learning_rate * grad_bias;
        let loss = logreg_loss(matrix, &weights, bias, config.logreg_l2);
        if !loss.is_finite() {
            return Err(Error::Train(format!(
                "non-finite loss (learning rate {} is too large)",
                config.logreg_learning_rate
            )));
        }
    }

    let model = LinearModel {
        weights,
        bias,
        kind: LinearKind::Logreg,
    };
    model.check_finite()?;
    Ok(model)
}
