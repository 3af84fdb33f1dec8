//! L2-regularized logistic regression trained by full-batch gradient descent.
//!
//! Objective, with `y' = +1` for Bullying and `-1` otherwise:
//!
//! ```text
//! J(w, b) = (1/N) sum_i ln(1 + exp(-y'_i (w . x_i + b))) + (lambda/2) |w|^2
//! ```
//!
//! The bias is not regularized and all weights start at zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::math;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogisticRegressionModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub l2_lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LrParams {
    pub l2_lambda: f64,
    pub learning_rate: f64,
    pub epochs: usize,
}

impl Default for LrParams {
    fn default() -> Self {
        LrParams {
            l2_lambda: 1e-3,
            learning_rate: 0.1,
            epochs: 500,
        }
    }
}

/// Gradient-norm threshold that ends training early.
pub const GRADIENT_TOLERANCE: f64 = 1e-6;

fn signed(y: Label) -> f64 {
    if y == Label::Bullying {
        1.0
    } else {
        -1.0
    }
}

/// Value of the regularized objective.
pub fn objective(weights: &[f64], bias: f64, vectors: &[SparseVector], labels: &[Label], l2_lambda: f64) -> f64 {
    let n = vectors.len().max(1) as f64;
    let data: f64 = vectors
        .iter()
        .zip(labels)
        .map(|(x, &y)| math::softplus(-signed(y) * (x.dot(weights) + bias)))
        .sum();
    data / n + 0.5 * l2_lambda * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Analytic gradient of [`objective`]: returns `(dJ/dw, dJ/db)`.
pub fn gradient(weights: &[f64], bias: f64, vectors: &[SparseVector], labels: &[Label], l2_lambda: f64) -> (Vec<f64>, f64) {
    let n = vectors.len().max(1) as f64;
    let mut gw: Vec<f64> = weights.iter().map(|w| l2_lambda * w).collect();
    let mut gb = 0.0;
    for (x, &y) in vectors.iter().zip(labels) {
        let ys = signed(y);
        let coef = -ys * math::sigmoid(-ys * (x.dot(weights) + bias)) / n;
        for (t, v) in x.iter() {
            gw[t] += coef * v;
        }
        gb += coef;
    }
    (gw, gb)
}

/// Trains the model; the second value is the objective before each update
/// plus the final value.
pub fn train_lr(vectors: &[SparseVector], labels: &[Label], dim: usize, params: &LrParams) -> Result<(LogisticRegressionModel, Vec<f64>)> {
    if vectors.len() != labels.len() {
        return Err(Error::LengthMismatch(vectors.len(), labels.len()));
    }
    if vectors.is_empty() {
        return Err(Error::EmptyInput("logistic regression needs training data"));
    }
    if !(params.learning_rate > 0.0) || !(params.l2_lambda >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "learning_rate must be positive and l2_lambda non-negative, got {params:?}"
        )));
    }
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut history = Vec::with_capacity(params.epochs + 1);
    for iter in 0..params.epochs {
        let loss = objective(&w, b, vectors, labels, params.l2_lambda);
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss(iter));
        }
        history.push(loss);
        let (gw, gb) = gradient(&w, b, vectors, labels, params.l2_lambda);
        let g_inf = gw.iter().fold(gb.abs(), |m, g| m.max(g.abs()));
        if g_inf < GRADIENT_TOLERANCE {
            break;
        }
        for (wi, gi) in w.iter_mut().zip(&gw) {
            *wi -= params.learning_rate * gi;
        }
        b -= params.learning_rate * gb;
    }
    let last = objective(&w, b, vectors, labels, params.l2_lambda);
    if !last.is_finite() {
        return Err(Error::NonFiniteLoss(history.len()));
    }
    history.push(last);
    Ok((
        LogisticRegressionModel {
            weights: w,
            bias: b,
            l2_lambda: params.l2_lambda,
        },
        history,
    ))
}

impl LogisticRegressionModel {
    /// P(Bullying | x).
    pub fn probability(&self, x: &SparseVector) -> f64 {
        math::sigmoid(x.dot(&self.weights) + self.bias)
    }

    /// Bullying iff the probability reaches `threshold`.
    pub fn predict(&self, x: &SparseVector, threshold: f64) -> (Label, f64) {
        let p = self.probability(x);
        (if p >= threshold { Label::Bullying } else { Label::NonBullying }, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(usize, f64)]) -> SparseVector {
        SparseVector {
            indices: pairs.iter().map(|p| p.0).collect(),
            values: pairs.iter().map(|p| p.1).collect(),
        }
    }

    fn separable() -> (Vec<SparseVector>, Vec<Label>) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for _ in 0..10 {
            x.push(sv(&[(0, 1.0)]));
            y.push(Label::Bullying);
            x.push(sv(&[(1, 1.0)]));
            y.push(Label::NonBullying);
        }
        (x, y)
    }

    #[test]
    fn separable_training_accuracy() {
        let (x, y) = separable();
        let params = LrParams {
            l2_lambda: 0.0,
            learning_rate: 0.1,
            epochs: 500,
        };
        let (m, hist) = train_lr(&x, &y, 2, &params).unwrap();
        for (xi, &yi) in x.iter().zip(&y) {
            assert_eq!(m.predict(xi, 0.5).0, yi);
        }
        for pair in hist.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-15);
        }
    }

    #[test]
    fn heavy_regularization_shrinks_weights() {
        let (mut x, mut y) = separable();
        x.push(sv(&[(0, 1.0)]));
        y.push(Label::Bullying);
        let params = LrParams {
            l2_lambda: 1e6,
            learning_rate: 1e-7,
            epochs: 2000,
        };
        let (m, _) = train_lr(&x, &y, 2, &params).unwrap();
        assert!(m.weights.iter().all(|w| w.abs() < 1e-5));
        // Only the bias learns: everything goes to the majority class.
        assert!(x.iter().all(|xi| m.predict(xi, 0.5).0 == Label::Bullying));
    }

    #[test]
    fn single_step_gradient_matches_hand_calculation() {
        // y = 1 (Bullying), x = (0.5, -2), w = 0: dJ/dw = (sigmoid(0) - 1) x.
        let x = [sv(&[(0, 0.5), (1, -2.0)])];
        let (gw, gb) = gradient(&[0.0, 0.0], 0.0, &x, &[Label::Bullying], 0.0);
        assert_eq!(gw, vec![-0.25, 1.0]);
        assert_eq!(gb, -0.5);
        let params = LrParams {
            l2_lambda: 0.0,
            learning_rate: 0.1,
            epochs: 1,
        };
        let (m, _) = train_lr(&x, &[Label::Bullying], 2, &params).unwrap();
        assert_eq!(m.weights, vec![0.025, -0.1]);
        assert_eq!(m.bias, 0.05);
    }

    #[test]
    fn prediction_rules() {
        let m = LogisticRegressionModel {
            weights: vec![0.0, 0.0],
            bias: 0.0,
            l2_lambda: 0.0,
        };
        let x = sv(&[(0, 1.0), (1, 1.0)]);
        assert_eq!(m.predict(&x, 0.5), (Label::Bullying, 0.5));
        let m = LogisticRegressionModel { bias: 10.0, ..m };
        assert!(m.probability(&x) > 0.9999);
        let m = LogisticRegressionModel {
            weights: vec![2.0, -2.0],
            bias: 0.0,
            l2_lambda: 0.0,
        };
        assert_eq!(m.probability(&x), 0.5);
    }

    #[test]
    fn rejects_bad_parameters() {
        let (x, y) = separable();
        let bad = LrParams {
            learning_rate: 0.0,
            ..Default::default()
        };
        assert!(train_lr(&x, &y, 2, &bad).is_err());
        let nan = LrParams {
            learning_rate: f64::INFINITY,
            ..Default::default()
        };
        assert!(matches!(train_lr(&x, &y, 2, &nan), Err(Error::NonFiniteLoss(_))));
    }
}
