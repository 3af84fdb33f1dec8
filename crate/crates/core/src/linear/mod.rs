//! The classical track: TF-IDF features feeding Naive Bayes, logistic
//! regression or a linear SVM.

mod grid;
mod logistic;
mod naive_bayes;
mod svm;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use grid::{grid_search, grid_search_with, CandidateResult, GridSearchResult, ParamGrid};
pub use logistic::{gradient as lr_gradient, objective as lr_objective, train_lr, LogisticRegressionModel, LrParams, GRADIENT_TOLERANCE};
pub use naive_bayes::{train_nb, NaiveBayesModel};
pub use svm::{svm_objective, train_svm, LinearSvmModel, SvmParams};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::eval::{Classifier, Estimator};
use crate::features::{fit_tfidf, SparseVector, TfidfConfig, TfidfModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Family {
    NaiveBayes,
    LogisticRegression,
    LinearSvm,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::NaiveBayes, Family::LogisticRegression, Family::LinearSvm];

    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "nb" | "naive_bayes" => Ok(Family::NaiveBayes),
            "lr" | "logistic_regression" => Ok(Family::LogisticRegression),
            "svm" | "linear_svm" => Ok(Family::LinearSvm),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    /// Tag used in model files.
    pub fn tag(self) -> &'static str {
        match self {
            Family::NaiveBayes => "naive_bayes",
            Family::LogisticRegression => "logistic_regression",
            Family::LinearSvm => "linear_svm",
        }
    }

    /// Row name in benchmark tables.
    pub fn display_name(self) -> &'static str {
        match self {
            Family::NaiveBayes => "Naive Bayes",
            Family::LogisticRegression => "Logistic Regression",
            Family::LinearSvm => "SVM",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::NaiveBayes => &["alpha"],
            Family::LogisticRegression => &["l2_lambda", "learning_rate", "epochs"],
            Family::LinearSvm => &["reg_lambda", "epochs"],
        }
    }

    /// The search space used when none is configured.
    pub fn default_grid(self) -> ParamGrid {
        match self {
            Family::NaiveBayes => ParamGrid::new().axis("alpha", &[0.1, 0.5, 1.0]),
            Family::LogisticRegression => ParamGrid::new().axis("l2_lambda", &[1e-4, 1e-3, 1e-2]),
            Family::LinearSvm => ParamGrid::new().axis("reg_lambda", &[1e-4, 1e-3, 1e-2]),
        }
    }
}

/// An ordered list of named hyperparameter values.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamSet(pub Vec<(String, f64)>);

impl ParamSet {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        match self.0.iter_mut().find(|(k, _)| k == name) {
            Some(slot) => slot.1 = value,
            None => self.0.push((name.to_string(), value)),
        }
        self
    }
}

impl core::fmt::Display for ParamSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// A family with concrete hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LinearSpec {
    NaiveBayes { alpha: f64 },
    Logistic(LrParams),
    Svm(SvmParams),
}

fn as_count(name: &str, v: f64) -> Result<usize> {
    if v >= 0.0 && libm::trunc(v) == v && v.is_finite() {
        Ok(v as usize)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be a non-negative integer, got {v}")))
    }
}

impl LinearSpec {
    /// Fills the family's defaults, overridden by `params`. Unknown names
    /// are rejected.
    pub fn from_params(family: Family, params: &ParamSet, seed: u64) -> Result<LinearSpec> {
        for (k, _) in &params.0 {
            if !family.param_names().contains(&k.as_str()) {
                return Err(Error::InvalidParameter(format!("{} has no parameter {k:?}", family.tag())));
            }
        }
        Ok(match family {
            Family::NaiveBayes => LinearSpec::NaiveBayes {
                alpha: params.get("alpha").unwrap_or(1.0),
            },
            Family::LogisticRegression => {
                let d = LrParams::default();
                LinearSpec::Logistic(LrParams {
                    l2_lambda: params.get("l2_lambda").unwrap_or(d.l2_lambda),
                    learning_rate: params.get("learning_rate").unwrap_or(d.learning_rate),
                    epochs: params.get("epochs").map(|e| as_count("epochs", e)).transpose()?.unwrap_or(d.epochs),
                })
            }
            Family::LinearSvm => {
                let d = SvmParams::default();
                LinearSpec::Svm(SvmParams {
                    reg_lambda: params.get("reg_lambda").unwrap_or(d.reg_lambda),
                    epochs: params.get("epochs").map(|e| as_count("epochs", e)).transpose()?.unwrap_or(d.epochs),
                    seed,
                })
            }
        })
    }

    pub fn family(&self) -> Family {
        match self {
            LinearSpec::NaiveBayes { .. } => Family::NaiveBayes,
            LinearSpec::Logistic(_) => Family::LogisticRegression,
            LinearSpec::Svm(_) => Family::LinearSvm,
        }
    }

    pub fn train(&self, vectors: &[SparseVector], labels: &[Label], dim: usize) -> Result<LinearModel> {
        Ok(match self {
            LinearSpec::NaiveBayes { alpha } => LinearModel::NaiveBayes(train_nb(vectors, labels, dim, *alpha)?),
            LinearSpec::Logistic(p) => LinearModel::Logistic(train_lr(vectors, labels, dim, p)?.0),
            LinearSpec::Svm(p) => LinearModel::Svm(train_svm(vectors, labels, dim, p)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LinearModel {
    NaiveBayes(NaiveBayesModel),
    Logistic(LogisticRegressionModel),
    Svm(LinearSvmModel),
}

impl LinearModel {
    pub fn family(&self) -> Family {
        match self {
            LinearModel::NaiveBayes(_) => Family::NaiveBayes,
            LinearModel::Logistic(_) => Family::LogisticRegression,
            LinearModel::Svm(_) => Family::LinearSvm,
        }
    }

    /// Label plus a score: P(Bullying) for Naive Bayes and logistic
    /// regression, the signed decision value for the SVM.
    pub fn predict(&self, x: &SparseVector) -> (Label, f64) {
        match self {
            LinearModel::NaiveBayes(m) => {
                let label = m.predict(x).0;
                (label, m.posteriors(x)[0])
            }
            LinearModel::Logistic(m) => m.predict(x, 0.5),
            LinearModel::Svm(m) => m.predict(x),
        }
    }
}

/// Fits TF-IDF on the training documents, then the linear model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfidfEstimator {
    pub spec: LinearSpec,
    pub tfidf: TfidfConfig,
}

/// A fitted featurizer plus linear model.
#[derive(Debug, Clone, PartialEq)]
pub struct TfidfClassifier {
    pub tfidf: TfidfModel,
    pub model: LinearModel,
}

impl TfidfClassifier {
    pub fn predict_scored(&self, doc: &[String]) -> (Label, f64) {
        self.model.predict(&self.tfidf.transform(doc))
    }
}

impl Classifier for TfidfClassifier {
    fn predict(&self, doc: &[String]) -> Label {
        self.predict_scored(doc).0
    }
}

impl Estimator for TfidfEstimator {
    type Model = TfidfClassifier;

    fn fit(&self, docs: &[&[String]], labels: &[Label]) -> Result<TfidfClassifier> {
        let tfidf = fit_tfidf(docs, self.tfidf)?;
        let vectors = tfidf.transform_all(docs);
        let model = self.spec.train(&vectors, labels, tfidf.dim())?;
        Ok(TfidfClassifier { tfidf, model })
    }
}
