//! Versioned text serialization for trained models.
//!
//! Header line: `negscope-model v1 <kind> |V|=<n>`. Lines opening with `#`
//! are ignored on load, which lets callers embed provenance comments without
//! touching the parameters. KNN models reference their full training matrix
//! and are not serialized standalone; evaluation re-fits them per fold.

use std::fs;
use std::path::Path;

use crate::corpus::PolarityLabel;
use crate::error::{Error, Result};

use super::{LinearKind, LinearModel, NbModel, TrainedModel};

pub const MODEL_FORMAT_VERSION: &str = "v1";

/// Serialize a model to `path`. Extra `comments` are written under the
/// header, each prefixed with `# `.
pub fn save_model(model: &TrainedModel, path: &Path, comments: &[String]) -> Result<()> {
    let body = render_model(model, comments)?;
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn render_model(model: &TrainedModel, comments: &[String]) -> Result<String> {
    let mut out = String::new();
    match model {
        TrainedModel::Linear(m) => {
            out.push_str(&format!(
                "negscope-model {MODEL_FORMAT_VERSION} {} |V|={}\n",
                m.kind.name(),
                m.weights.len()
            ));
            for c in comments {
                out.push_str(&format!("# {c}\n"));
            }
            out.push_str(&format!("bias {}\n", m.bias));
            let rendered: Vec<String> = m.weights.iter().map(|w| w.to_string()).collect();
            out.push_str(&format!("weights {}\n", rendered.join(" ")));
        }
        TrainedModel::Nb(m) => {
            out.push_str(&format!(
                "negscope-model {MODEL_FORMAT_VERSION} nb |V|={}\n",
                m.n_features()
            ));
            for c in comments {
                out.push_str(&format!("# {c}\n"));
            }
            for (label, prior) in &m.class_log_prior {
                out.push_str(&format!("prior {label} {prior}\n"));
            }
            for (label, likelihood) in &m.feature_log_likelihood {
                let rendered: Vec<String> = likelihood.iter().map(|w| w.to_string()).collect();
                out.push_str(&format!("likelihood {label} {}\n", rendered.join(" ")));
            }
        }
        TrainedModel::Knn(_) => {
            return Err(Error::Model(
                "knn models are not serialized standalone; run the evaluate command instead"
                    .into(),
            ));
        }
    }
    Ok(out)
}

/// Load a model saved by `save_model`. Predictions of the loaded model are
/// bit-identical to the original's.
pub fn load_model(path: &Path) -> Result<TrainedModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty());

    let header = lines
        .next()
        .ok_or_else(|| Error::Model("empty model file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [magic, version, kind, size] = parts.as_slice() else {
        return Err(Error::Model(format!("malformed header {header:?}")));
    };
    if *magic != "negscope-model" {
        return Err(Error::Model("not a negscope model file".into()));
    }
    if *version != MODEL_FORMAT_VERSION {
        return Err(Error::Model(format!(
            "unsupported model version {version:?} (this build reads {MODEL_FORMAT_VERSION})"
        )));
    }
    let n_features: usize = size
        .strip_prefix("|V|=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Model(format!("malformed size field {size:?}")))?;

    match *kind {
        "svm" | "logreg" => {
            let linear_kind = if *kind == "svm" {
                LinearKind::Svm
            } else {
                LinearKind::Logreg
            };
            let mut bias: Option<f64> = None;
            let mut weights: Option<Vec<f64>> = None;
            for line in lines {
                let (field, rest) = line
                    .split_once(' ')
                    .ok_or_else(|| Error::Model(format!("malformed line {line:?}")))?;
                match field {
                    "bias" => bias = Some(parse_float(rest)?),
                    "weights" => weights = Some(parse_floats(rest, n_features)?),
                    other => return Err(Error::Model(format!("unknown field {other:?}"))),
                }
            }
            let bias = bias.ok_or_else(|| Error::Model("truncated file: missing bias".into()))?;
            let weights =
                weights.ok_or_else(|| Error::Model("truncated file: missing weights".into()))?;
            Ok(TrainedModel::Linear(LinearModel {
                weights,
                bias,
                kind: linear_kind,
            }))
        }
        "nb" => {
            let mut priors = std::collections::BTreeMap::new();
            let mut likelihoods = std::collections::BTreeMap::new();
            for line in lines {
                let mut fields = line.splitn(3, ' ');
                let (field, label, rest) = (
                    fields.next().unwrap_or(""),
                    fields.next().unwrap_or(""),
                    fields.next().unwrap_or(""),
                );
                let label: PolarityLabel = label
                    .parse()
                    .map_err(|e: String| Error::Model(e))?;
                match field {
                    "prior" => {
                        priors.insert(label, parse_float(rest)?);
                    }
                    "likelihood" => {
                        likelihoods.insert(label, parse_floats(rest, n_features)?);
                    }
                    other => return Err(Error::Model(format!("unknown field {other:?}"))),
                }
            }
            if priors.len() != 2 || likelihoods.len() != 2 {
                return Err(Error::Model("truncated file: missing nb parameters".into()));
            }
            Ok(TrainedModel::Nb(NbModel {
                class_log_prior: priors,
                feature_log_likelihood: likelihoods,
            }))
        }
        "knn" => Err(Error::Model(
            "knn models are not serialized standalone".into(),
        )),
        other => Err(Error::Model(format!("unknown model kind {other:?}"))),
    }
}

fn parse_float(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Model(format!("malformed float {s:?}")))
}

fn parse_floats(s: &str, expected: usize) -> Result<Vec<f64>> {
    let values: Vec<f64> = s
        .split_whitespace()
        .map(parse_float)
        .collect::<Result<_>>()?;
    if values.len() != expected {
        return Err(Error::Model(format!(
            "expected {expected} values, found {}",
            values.len()
        )));
    }
    Ok(values)
}
