//! Linear SVM trained with Pegasos stochastic subgradient steps on
//! `(lambda/2)|w|^2 + (1/N) sum_i max(0, 1 - y_i (w . x_i + b))`.
//!
//! Step size at update `t` (counted from 1 across epochs) is
//! `1 / (lambda t)`. The example order is reshuffled every epoch with the
//! seeded generator. `w` is stored as `scale * v` so the shrink step costs
//! O(1) instead of O(V).
//!
//! The bias is trained as the weight of a constant feature, so it shrinks
//! with `w`. Left unregularized, the early steps of size `1/lambda` push it
//! far from zero and nothing pulls it back at small `lambda`.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearSvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub reg_lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SvmParams {
    pub reg_lambda: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            reg_lambda: 1e-3,
            epochs: 200,
            seed: 42,
        }
    }
}

fn signed(y: Label) -> f64 {
    if y == Label::Bullying {
        1.0
    } else {
        -1.0
    }
}

/// Regularized hinge objective.
pub fn svm_objective(weights: &[f64], bias: f64, vectors: &[SparseVector], labels: &[Label], reg_lambda: f64) -> f64 {
    let n = vectors.len().max(1) as f64;
    let hinge: f64 = vectors
        .iter()
        .zip(labels)
        .map(|(x, &y)| (1.0 - signed(y) * (x.dot(weights) + bias)).max(0.0))
        .sum();
    0.5 * reg_lambda * weights.iter().map(|w| w * w).sum::<f64>() + hinge / n
}

pub fn train_svm(vectors: &[SparseVector], labels: &[Label], dim: usize, params: &SvmParams) -> Result<LinearSvmModel> {
    if vectors.len() != labels.len() {
        return Err(Error::LengthMismatch(vectors.len(), labels.len()));
    }
    if !(params.reg_lambda > 0.0) || !params.reg_lambda.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "reg_lambda must be positive, got {}",
            params.reg_lambda
        )));
    }
    if vectors.is_empty() {
        return Err(Error::EmptyInput("svm needs training data"));
    }
    let lambda = params.reg_lambda;
    let mut rng = SeededRng::new(params.seed);
    let mut v = vec![0.0; dim];
    let mut scale = 1.0;
    let mut bias = 0.0;
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    let mut t: u64 = 0;
    for _ in 0..params.epochs {
        rng.shuffle(&mut order);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let x = &vectors[i];
            let y = signed(labels[i]);
            let margin = y * scale * (x.dot(&v) + bias);
            scale *= 1.0 - eta * lambda;
            if scale == 0.0 {
                v.iter_mut().for_each(|w| *w = 0.0);
                bias = 0.0;
                scale = 1.0;
            }
            if margin < 1.0 {
                let step = eta * y / scale;
                for (j, xv) in x.iter() {
                    v[j] += step * xv;
                }
                bias += step;
            }
        }
        if scale < 1e-6 {
            v.iter_mut().for_each(|w| *w *= scale);
            bias *= scale;
            scale = 1.0;
        }
    }
    let weights: Vec<f64> = v.iter().map(|w| w * scale).collect();
    let bias = bias * scale;
    if weights.iter().any(|w| !w.is_finite()) || !bias.is_finite() {
        return Err(Error::NonFiniteLoss(t as usize));
    }
    Ok(LinearSvmModel {
        weights,
        bias,
        reg_lambda: lambda,
    })
}

impl LinearSvmModel {
    pub fn decision(&self, x: &SparseVector) -> f64 {
        x.dot(&self.weights) + self.bias
    }

    /// Sign of the decision value; exactly zero counts as Bullying.
    pub fn predict(&self, x: &SparseVector) -> (Label, f64) {
        let s = self.decision(x);
        (if s >= 0.0 { Label::Bullying } else { Label::NonBullying }, s)
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
    fn separable_margins_positive() {
        let (x, y) = separable();
        for lambda in [1e-4, 1e-3, 1e-2] {
            let params = SvmParams {
                reg_lambda: lambda,
                ..Default::default()
            };
            let m = train_svm(&x, &y, 2, &params).unwrap();
            for (xi, &yi) in x.iter().zip(&y) {
                assert!(signed(yi) * m.decision(xi) > 0.0, "lambda {lambda}");
            }
            assert!(svm_objective(&m.weights, m.bias, &x, &y, lambda) < svm_objective(&[0.0, 0.0], 0.0, &x, &y, lambda));
        }
    }

    #[test]
    fn single_repeated_example_reaches_zero_hinge() {
        let x = vec![sv(&[(0, 1.0)]); 5];
        let y = vec![Label::Bullying; 5];
        let m = train_svm(&x, &y, 1, &SvmParams::default()).unwrap();
        assert!(m.decision(&x[0]) >= 1.0 - 1e-9);
    }

    #[test]
    fn deterministic_under_seed() {
        let (x, y) = separable();
        let a = train_svm(&x, &y, 2, &SvmParams::default()).unwrap();
        let b = train_svm(&x, &y, 2, &SvmParams::default()).unwrap();
        assert_eq!(a.weights.iter().map(|w| w.to_bits()).collect::<Vec<_>>(), b.weights.iter().map(|w| w.to_bits()).collect::<Vec<_>>());
        assert_eq!(a.bias.to_bits(), b.bias.to_bits());
    }

    #[test]
    fn prediction_rules() {
        let zero = LinearSvmModel {
            weights: vec![0.0, 0.0],
            bias: 0.0,
            reg_lambda: 1.0,
        };
        assert_eq!(zero.predict(&sv(&[(0, 1.0)])), (Label::Bullying, 0.0));
        let m = LinearSvmModel {
            weights: vec![1.5, -2.0],
            bias: 0.25,
            reg_lambda: 1.0,
        };
        let x = sv(&[(0, 2.0), (1, 1.0)]);
        assert_eq!(m.predict(&x), (Label::Bullying, 1.25));
        let mut scaled = x.clone();
        scaled.scale(3.0);
        assert_eq!(m.predict(&sv(&[(1, 1.0)])).0, Label::NonBullying);
        assert_eq!(m.predict(&scaled).0, Label::Bullying);
    }

    #[test]
    fn rejects_non_positive_lambda() {
        let (x, y) = separable();
        let p = SvmParams {
            reg_lambda: 0.0,
            ..Default::default()
        };
        assert!(matches!(train_svm(&x, &y, 2, &p), Err(Error::InvalidParameter(_))));
    }
}
