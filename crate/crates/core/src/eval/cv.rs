use alloc::string::String;
use alloc::vec::Vec;

use super::metrics::{confusion, metrics, MetricsReport};
use crate::corpus::{kfold_split, Fold, Label};
use crate::error::Result;
use crate::math;

/// A fitted model that labels preprocessed documents.
pub trait Classifier {
    fn predict(&self, doc: &[String]) -> Label;
}

/// Something that can be fitted on preprocessed documents.
pub trait Estimator {
    type Model: Classifier;
    fn fit(&self, docs: &[&[String]], labels: &[Label]) -> Result<Self::Model>;
}

/// Mean and sample standard deviation of one metric across folds.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summary {
    pub mean: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricSummary {
    pub accuracy: Summary,
    pub weighted_precision: Summary,
    pub weighted_recall: Summary,
    pub weighted_f1: Summary,
    pub macro_precision: Summary,
    pub macro_recall: Summary,
    pub macro_f1: Summary,
}

/// Fold means with sample (N - 1) standard deviations.
pub fn aggregate(reports: &[MetricsReport]) -> MetricSummary {
    let s = |f: fn(&MetricsReport) -> f64| {
        let xs: Vec<f64> = reports.iter().map(f).collect();
        Summary {
            mean: math::mean(&xs),
            stddev: math::std_dev(&xs, 1),
        }
    };
    MetricSummary {
        accuracy: s(|r| r.accuracy),
        weighted_precision: s(|r| r.weighted_precision),
        weighted_recall: s(|r| r.weighted_recall),
        weighted_f1: s(|r| r.weighted_f1),
        macro_precision: s(|r| r.macro_precision),
        macro_recall: s(|r| r.macro_recall),
        macro_f1: s(|r| r.macro_f1),
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CvResult {
    pub folds: Vec<MetricsReport>,
    pub summary: MetricSummary,
}

/// Fits on each fold's training part only and scores its test part.
pub fn cross_validate_folds<E: Estimator, D: AsRef<[String]>>(
    estimator: &E,
    docs: &[D],
    labels: &[Label],
    folds: &[Fold],
) -> Result<CvResult> {
    let mut reports = Vec::with_capacity(folds.len());
    for fold in folds {
        let train_docs: Vec<&[String]> = fold.train.iter().map(|&i| docs[i].as_ref()).collect();
        let train_labels: Vec<Label> = fold.train.iter().map(|&i| labels[i]).collect();
        let model = estimator.fit(&train_docs, &train_labels)?;
        let truth: Vec<Label> = fold.test.iter().map(|&i| labels[i]).collect();
        let predicted: Vec<Label> = fold.test.iter().map(|&i| model.predict(docs[i].as_ref())).collect();
        reports.push(metrics(&confusion(&truth, &predicted)?));
    }
    let summary = aggregate(&reports);
    Ok(CvResult { folds: reports, summary })
}

/// Stratified k-fold cross-validation. Documents are expected to be
/// preprocessed already; preprocessing is stateless so doing it once up
/// front is the same as doing it per fold.
pub fn cross_validate<E: Estimator, D: AsRef<[String]>>(
    estimator: &E,
    docs: &[D],
    labels: &[Label],
    k: usize,
    seed: u64,
) -> Result<CvResult> {
    let folds = kfold_split(labels, k, seed, true)?;
    cross_validate_folds(estimator, docs, labels, &folds)
}
