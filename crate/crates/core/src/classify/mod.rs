//! The four classifiers trained on TF-IDF matrices: linear SVM, multinomial
//! Naive Bayes, logistic regression, and KNN. All of them consume the same
//! representation; NB treats the nonnegative weights as fractional counts.
//!
//! Training is deterministic given (matrix, config, seed). Score ties and
//! vote ties resolve to the positive class.

mod knn;
mod linear;
mod model_io;
mod nb;

pub use knn::{knn_predict, KnnModel};
pub use linear::{
    logreg_gradient, logreg_loss, predict_linear, svm_objective, train_logreg, train_svm_linear,
    LinearKind, LinearModel,
};
pub use model_io::{load_model, save_model, MODEL_FORMAT_VERSION};
pub use nb::{predict_nb, train_nb, NbModel};

use std::str::FromStr;

use crate::corpus::PolarityLabel;
use crate::error::{Error, Result};
use crate::features::{DocumentTermMatrix, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassifierKind {
    Svm,
    Nb,
    Logreg,
    Knn,
}

impl ClassifierKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Svm => "svm",
            ClassifierKind::Nb => "nb",
            ClassifierKind::Logreg => "logreg",
            ClassifierKind::Knn => "knn",
        }
    }

    pub fn all() -> [ClassifierKind; 4] {
        [
            ClassifierKind::Svm,
            ClassifierKind::Nb,
            ClassifierKind::Logreg,
            ClassifierKind::Knn,
        ]
    }
}

impl FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "svm" => Ok(ClassifierKind::Svm),
            "nb" => Ok(ClassifierKind::Nb),
            "logreg" => Ok(ClassifierKind::Logreg),
            "knn" => Ok(ClassifierKind::Knn),
            other => Err(format!(
                "unknown classifier {other:?} (expected svm, nb, logreg, or knn)"
            )),
        }
    }
}

/// Hyperparameters for all four trainers. The reference experiment setting
/// fixes K = 50 neighbors; the remaining values are this tool's defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub classifier: ClassifierKind,
    pub k_neighbors: usize,
    pub nb_alpha: f64,
    pub logreg_learning_rate: f64,
    pub logreg_l2: f64,
    pub epochs: usize,
    pub svm_c: f64,
    pub seed: u64,
}

impl TrainConfig {
    pub fn new(classifier: ClassifierKind) -> Self {
        TrainConfig {
            classifier,
            k_neighbors: 50,
            nb_alpha: 1.0,
            logreg_learning_rate: 0.1,
            logreg_l2: 1e-3,
            epochs: 100,
            svm_c: 1.0,
            seed: 0,
        }
    }

    pub fn with_seed(classifier: ClassifierKind, seed: u64) -> Self {
        TrainConfig {
            seed,
            ..TrainConfig::new(classifier)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors < 1 {
            return Err(Error::Train("k_neighbors must be at least 1".into()));
        }
        if self.nb_alpha <= 0.0 {
            return Err(Error::Train("nb_alpha must be positive".into()));
        }
        if self.epochs < 1 {
            return Err(Error::Train("epochs must be at least 1".into()));
        }
        if self.logreg_learning_rate <= 0.0 {
            return Err(Error::Train("learning rate must be positive".into()));
        }
        if self.svm_c <= 0.0 {
            return Err(Error::Train("svm_c must be positive".into()));
        }
        Ok(())
    }
}

/// A trained classifier of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Linear(LinearModel),
    Nb(NbModel),
    Knn(KnnModel),
}

impl TrainedModel {
    pub fn kind_name(&self) -> &'static str {
        match self {
            TrainedModel::Linear(m) => m.kind.name(),
            TrainedModel::Nb(_) => "nb",
            TrainedModel::Knn(_) => "knn",
        }
    }
}

/// Train the classifier selected by `config.classifier`.
pub fn train_model(matrix: &DocumentTermMatrix, config: &TrainConfig) -> Result<TrainedModel> {
    config.validate()?;
    match config.classifier {
        ClassifierKind::Svm => Ok(TrainedModel::Linear(train_svm_linear(matrix, config)?)),
        ClassifierKind::Logreg => Ok(TrainedModel::Linear(train_logreg(matrix, config)?)),
        ClassifierKind::Nb => Ok(TrainedModel::Nb(train_nb(matrix, config.nb_alpha)?)),
        ClassifierKind::Knn => Ok(TrainedModel::Knn(KnnModel::fit(matrix, config.k_neighbors)?)),
    }
}

/// Predict the label of one vector with any trained model.
pub fn predict_label(model: &TrainedModel, x: &SparseVector) -> PolarityLabel {
    match model {
        TrainedModel::Linear(m) => predict_linear(m, x).0,
        TrainedModel::Nb(m) => predict_nb(m, x).0,
        TrainedModel::Knn(m) => knn_predict(m, x),
    }
}
