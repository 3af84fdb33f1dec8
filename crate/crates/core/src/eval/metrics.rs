use crate::corpus::Label;
use crate::error::{Error, Result};

/// 2x2 counts, rows = true class, columns = predicted class, both indexed
/// by [`Label::id`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionMatrix {
    pub counts: [[u64; 2]; 2],
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn add(&mut self, truth: Label, predicted: Label) {
        self.counts[truth.id()][predicted.id()] += 1;
    }
}

pub fn confusion(y_true: &[Label], y_pred: &[Label]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch(y_true.len(), y_pred.len()));
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput("confusion matrix needs at least one example"));
    }
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        cm.add(t, p);
    }
    Ok(cm)
}

/// Accuracy plus per-class, macro and support-weighted precision, recall
/// and F1. A zero denominator yields 0 and sets `zero_division`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: [f64; 2],
    pub recall: [f64; 2],
    pub f1: [f64; 2],
    pub support: [u64; 2],
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub zero_division: bool,
}

fn ratio(num: u64, den: u64, flag: &mut bool) -> f64 {
    if den == 0 {
        *flag = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn metrics(cm: &ConfusionMatrix) -> MetricsReport {
    let c = &cm.counts;
    let total = cm.total();
    let mut r = MetricsReport::default();
    let mut zero = false;
    r.accuracy = ratio(c[0][0] + c[1][1], total, &mut zero);
    for k in 0..2 {
        let tp = c[k][k];
        let predicted = c[0][k] + c[1][k];
        let actual = c[k][0] + c[k][1];
        r.support[k] = actual;
        r.precision[k] = ratio(tp, predicted, &mut zero);
        r.recall[k] = ratio(tp, actual, &mut zero);
        let pr = r.precision[k] + r.recall[k];
        r.f1[k] = if pr == 0.0 {
            zero = true;
            0.0
        } else {
            2.0 * r.precision[k] * r.recall[k] / pr
        };
    }
    r.macro_precision = (r.precision[0] + r.precision[1]) / 2.0;
    r.macro_recall = (r.recall[0] + r.recall[1]) / 2.0;
    r.macro_f1 = (r.f1[0] + r.f1[1]) / 2.0;
    let weighted = |v: &[f64; 2]| {
        if total == 0 {
            0.0
        } else {
            (v[0] * r.support[0] as f64 + v[1] * r.support[1] as f64) / total as f64
        }
    };
    r.weighted_precision = weighted(&r.precision);
    r.weighted_recall = weighted(&r.recall);
    r.weighted_f1 = weighted(&r.f1);
    r.zero_division = zero;
    r
}

/// Metric used to rank grid-search candidates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Objective {
    #[default]
    WeightedF1,
    MacroF1,
    Accuracy,
}

impl Objective {
    pub fn score(self, r: &MetricsReport) -> f64 {
        match self {
            Objective::WeightedF1 => r.weighted_f1,
            Objective::MacroF1 => r.macro_f1,
            Objective::Accuracy => r.accuracy,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::WeightedF1 => "weighted_f1",
            Objective::MacroF1 => "macro_f1",
            Objective::Accuracy => "accuracy",
        }
    }

    pub fn parse(s: &str) -> Option<Objective> {
        match s {
            "weighted_f1" | "f1" => Some(Objective::WeightedF1),
            "macro_f1" => Some(Objective::MacroF1),
            "accuracy" => Some(Objective::Accuracy),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label::{Bullying as B, NonBullying as N};

    #[test]
    fn confusion_counts() {
        let cm = confusion(&[B, B, N, N], &[B, N, N, N]).unwrap();
        assert_eq!(cm.counts, [[1, 1], [0, 2]]);
        let perfect = confusion(&[B, N, N], &[B, N, N]).unwrap();
        assert_eq!(perfect.counts[0][1] + perfect.counts[1][0], 0);
        let one_col = confusion(&[B, N, N], &[N, N, N]).unwrap();
        assert_eq!(one_col.counts[0][0] + one_col.counts[1][0], 0);
        assert!(confusion(&[B], &[B, N]).is_err());
        assert!(confusion(&[], &[]).is_err());
    }

    #[test]
    fn hand_metrics() {
        let r = metrics(&ConfusionMatrix {
            counts: [[40, 5], [10, 45]],
        });
        assert!((r.accuracy - 0.85).abs() < 1e-15);
        assert!((r.precision[0] - 0.8).abs() < 1e-15);
        assert!((r.recall[0] - 40.0 / 45.0).abs() < 1e-15);
        assert!((r.f1[0] - 0.842_105_263_157_894_7).abs() < 1e-12);
        assert!((r.weighted_recall - r.accuracy).abs() < 1e-15);
        assert!((r.macro_f1 - (r.f1[0] + r.f1[1]) / 2.0).abs() < 1e-15);
        assert!(!r.zero_division);
    }

    #[test]
    fn perfect_and_degenerate() {
        let r = metrics(&ConfusionMatrix { counts: [[3, 0], [0, 4]] });
        assert_eq!((r.accuracy, r.macro_f1, r.weighted_f1, r.weighted_precision), (1.0, 1.0, 1.0, 1.0));
        let d = metrics(&ConfusionMatrix { counts: [[0, 3], [0, 4]] });
        assert_eq!((d.precision[0], d.recall[0], d.f1[0]), (0.0, 0.0, 0.0));
        assert!(d.zero_division);
    }
}
