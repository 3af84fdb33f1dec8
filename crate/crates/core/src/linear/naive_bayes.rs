//! Multinomial Naive Bayes over (possibly fractional) term weights.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::SparseVector;
use crate::math;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NaiveBayesModel {
    /// Indexed by [`Label::id`].
    pub log_prior: [f64; 2],
    /// `log_likelihood[c][t]` = ln P(term t | class c).
    pub log_likelihood: [Vec<f64>; 2],
    pub alpha: f64,
}

/// Fits class priors `n_c / N` and Laplace-smoothed term likelihoods
/// `(alpha + mass_c[t]) / (alpha * V + total_c)`, where `mass_c[t]` sums
/// the term's weight over the class's documents.
pub fn train_nb(vectors: &[SparseVector], labels: &[Label], dim: usize, alpha: f64) -> Result<NaiveBayesModel> {
    if vectors.len() != labels.len() {
        return Err(Error::LengthMismatch(vectors.len(), labels.len()));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("alpha must be positive, got {alpha}")));
    }
    let mut mass = [vec![0.0; dim], vec![0.0; dim]];
    let mut docs = [0usize; 2];
    for (x, y) in vectors.iter().zip(labels) {
        let c = y.id();
        docs[c] += 1;
        for (t, v) in x.iter() {
            mass[c][t] += v;
        }
    }
    for label in Label::ALL {
        if docs[label.id()] == 0 {
            return Err(Error::EmptyClass(label.as_str()));
        }
    }
    let n = vectors.len() as f64;
    let log_prior = [math::ln(docs[0] as f64 / n), math::ln(docs[1] as f64 / n)];
    let log_likelihood = mass.map(|m| {
        let total: f64 = m.iter().sum();
        let denom = alpha * dim as f64 + total;
        m.iter().map(|&x| math::ln((alpha + x) / denom)).collect::<Vec<f64>>()
    });
    Ok(NaiveBayesModel {
        log_prior,
        log_likelihood,
        alpha,
    })
}

impl NaiveBayesModel {
    pub fn dim(&self) -> usize {
        self.log_likelihood[0].len()
    }

    /// Joint log scores `ln P(c) + sum_t x[t] ln P(t | c)`.
    pub fn log_scores(&self, x: &SparseVector) -> [f64; 2] {
        let mut s = self.log_prior;
        for (c, score) in s.iter_mut().enumerate() {
            *score += x.iter().map(|(t, v)| v * self.log_likelihood[c][t]).sum::<f64>();
        }
        s
    }

    /// Class posteriors (normalized joint scores).
    pub fn posteriors(&self, x: &SparseVector) -> [f64; 2] {
        let s = self.log_scores(x);
        let z = math::log_sum_exp(&s);
        [math::exp(s[0] - z), math::exp(s[1] - z)]
    }

    /// Argmax of the log scores; a tie goes to the lower class id.
    pub fn predict(&self, x: &SparseVector) -> (Label, [f64; 2]) {
        let s = self.log_scores(x);
        let label = if s[1] > s[0] { Label::NonBullying } else { Label::Bullying };
        (label, s)
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

    fn four_doc() -> (Vec<SparseVector>, Vec<Label>) {
        // Vocabulary {a: 0, b: 1}.
        let x = vec![
            sv(&[(0, 2.0)]),
            sv(&[(0, 1.0), (1, 1.0)]),
            sv(&[(1, 2.0)]),
            sv(&[(0, 1.0), (1, 2.0)]),
        ];
        let y = vec![Label::Bullying, Label::Bullying, Label::NonBullying, Label::NonBullying];
        (x, y)
    }

    #[test]
    fn closed_form_likelihood() {
        let (x, y) = four_doc();
        let m = train_nb(&x, &y, 2, 1.0).unwrap();
        assert!((math::exp(m.log_likelihood[0][0]) - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.log_prior[0] - math::ln(0.5)).abs() < 1e-15);
        assert_eq!(m.log_prior[0], m.log_prior[1]);
        for c in 0..2 {
            let total: f64 = m.log_likelihood[c].iter().map(|&l| math::exp(l)).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn query_prefers_class_with_more_mass() {
        let (x, y) = four_doc();
        let m = train_nb(&x, &y, 2, 1.0).unwrap();
        assert_eq!(m.predict(&sv(&[(0, 1.0)])).0, Label::Bullying);
        assert_eq!(m.predict(&sv(&[(1, 1.0)])).0, Label::NonBullying);
    }

    #[test]
    fn zero_vector_uses_priors() {
        let x = vec![sv(&[(0, 1.0)]), sv(&[(1, 1.0)]), sv(&[(1, 1.0)])];
        let y = vec![Label::Bullying, Label::NonBullying, Label::NonBullying];
        let m = train_nb(&x, &y, 2, 1.0).unwrap();
        assert_eq!(m.predict(&SparseVector::default()).0, Label::NonBullying);
        // Equal priors and a zero vector tie; the lower class id wins.
        let (x, y) = four_doc();
        let m = train_nb(&x, &y, 2, 1.0).unwrap();
        assert_eq!(m.predict(&SparseVector::default()).0, Label::Bullying);
    }

    #[test]
    fn scaling_query_keeps_argmax_with_equal_priors() {
        let (x, y) = four_doc();
        let m = train_nb(&x, &y, 2, 1.0).unwrap();
        let q = sv(&[(0, 0.3), (1, 0.2)]);
        let base = m.predict(&q);
        for k in [0.5, 2.0, 10.0] {
            let mut scaled = q.clone();
            scaled.scale(k);
            let s = m.predict(&scaled);
            assert_eq!(s.0, base.0);
            let d0 = base.1[0] - base.1[1];
            assert!(((s.1[0] - s.1[1]) - k * d0).abs() < 1e-12);
        }
    }

    #[test]
    fn large_alpha_flattens_likelihoods() {
        let (x, y) = four_doc();
        let m = train_nb(&x, &y, 2, 1e12).unwrap();
        for c in 0..2 {
            for &l in &m.log_likelihood[c] {
                assert!((math::exp(l) - 0.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn empty_class_is_an_error() {
        let x = vec![sv(&[(0, 1.0)])];
        assert_eq!(train_nb(&x, &[Label::Bullying], 1, 1.0), Err(Error::EmptyClass("Non-bullying")));
        assert!(train_nb(&x, &[Label::Bullying], 1, 0.0).is_err());
    }
}
