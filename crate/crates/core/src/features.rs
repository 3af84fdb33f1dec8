//! Vocabulary construction and TF-IDF sparse vectors.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Sparse vector with strictly increasing indices and non-zero values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_zero(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * dense[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.values.iter().map(|v| v * v).sum())
    }

    pub fn scale(&mut self, k: f64) {
        for v in &mut self.values {
            *v *= k;
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TfidfConfig {
    /// Use `1 + ln(tf)` instead of the raw count.
    pub sublinear_tf: bool,
    pub l2_normalize: bool,
    pub min_df: usize,
    /// When false every idf is 1 (plain term counts).
    pub use_idf: bool,
    /// 1 for unigrams, 2 to add adjacent-pair bigrams.
    pub ngram_max: usize,
}

impl Default for TfidfConfig {
    fn default() -> Self {
        TfidfConfig {
            sublinear_tf: false,
            l2_normalize: true,
            min_df: 1,
            use_idf: true,
            ngram_max: 1,
        }
    }
}

impl TfidfConfig {
    /// Raw term counts: no idf weighting and no normalization.
    pub fn raw_counts() -> Self {
        TfidfConfig {
            use_idf: false,
            l2_normalize: false,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    pub token_to_id: BTreeMap<String, usize>,
    /// Tokens by id.
    pub tokens: Vec<String>,
    pub document_frequency: Vec<usize>,
    pub n_documents: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.token_to_id.get(token).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfidfModel {
    pub vocabulary: Vocabulary,
    pub idf: Vec<f64>,
    pub config: TfidfConfig,
}

/// Smoothed inverse document frequency `ln((1 + n) / (1 + df)) + 1`.
pub fn smoothed_idf(n_documents: usize, df: usize) -> f64 {
    math::ln((1.0 + n_documents as f64) / (1.0 + df as f64)) + 1.0
}

/// Expands a token list into the configured n-gram terms. Bigrams are the
/// two tokens joined by a space.
pub fn terms(tokens: &[String], ngram_max: usize) -> Vec<String> {
    let mut out: Vec<String> = tokens.to_vec();
    if ngram_max >= 2 {
        for w in tokens.windows(2) {
            let mut t = w[0].clone();
            t.push(' ');
            t.push_str(&w[1]);
            out.push(t);
        }
    }
    out
}

/// Learns the vocabulary (ids in first-occurrence order) and idf weights.
pub fn fit_tfidf<D: AsRef<[String]>>(docs: &[D], config: TfidfConfig) -> Result<TfidfModel> {
    if docs.iter().all(|d| d.as_ref().is_empty()) {
        return Err(Error::EmptyCorpus);
    }
    let mut order: Vec<String> = Vec::new();
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
        let doc_terms = terms(doc.as_ref(), config.ngram_max);
        for t in &doc_terms {
            if seen.insert(t.as_str(), ()).is_none() {
                let count = df.entry(t.clone()).or_insert(0);
                if *count == 0 {
                    order.push(t.clone());
                }
                *count += 1;
            }
        }
    }
    let n = docs.len();
    let mut vocabulary = Vocabulary {
        token_to_id: BTreeMap::new(),
        tokens: Vec::new(),
        document_frequency: Vec::new(),
        n_documents: n,
    };
    let mut idf = Vec::new();
    for t in order {
        let d = df[&t];
        if d < config.min_df.max(1) {
            continue;
        }
        vocabulary.token_to_id.insert(t.clone(), vocabulary.tokens.len());
        vocabulary.tokens.push(t);
        vocabulary.document_frequency.push(d);
        idf.push(if config.use_idf { smoothed_idf(n, d) } else { 1.0 });
    }
    if vocabulary.is_empty() {
        return Err(Error::EmptyVocabulary(config.min_df));
    }
    Ok(TfidfModel { vocabulary, idf, config })
}

impl TfidfModel {
    pub fn dim(&self) -> usize {
        self.idf.len()
    }

    /// Weights one document. Out-of-vocabulary terms are ignored; a document
    /// with no known term yields the zero vector.
    pub fn transform(&self, tokens: &[String]) -> SparseVector {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for t in terms(tokens, self.config.ngram_max) {
            if let Some(id) = self.vocabulary.id(&t) {
                *counts.entry(id).or_insert(0) += 1;
            }
        }
        let mut v = SparseVector {
            indices: Vec::with_capacity(counts.len()),
            values: Vec::with_capacity(counts.len()),
        };
        for (id, c) in counts {
            let tf = if self.config.sublinear_tf {
                1.0 + math::ln(c as f64)
            } else {
                c as f64
            };
            v.indices.push(id);
            v.values.push(tf * self.idf[id]);
        }
        if self.config.l2_normalize {
            let norm = v.norm();
            if norm > 0.0 {
                v.scale(1.0 / norm);
            }
        }
        v
    }

    pub fn transform_all<D: AsRef<[String]>>(&self, docs: &[D]) -> Vec<SparseVector> {
        docs.iter().map(|d| self.transform(d.as_ref())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn doc(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    fn raw_config() -> TfidfConfig {
        TfidfConfig {
            l2_normalize: false,
            ..Default::default()
        }
    }

    #[test]
    fn idf_hand_values() {
        let m = fit_tfidf(&[doc(&["a", "b"]), doc(&["a"])], raw_config()).unwrap();
        assert_eq!(m.vocabulary.tokens, vec!["a", "b"]);
        assert_eq!(m.vocabulary.document_frequency, vec![2, 1]);
        assert_eq!(m.idf[0], 1.0);
        assert!((m.idf[1] - 1.405_465_108_108_164_4).abs() < 1e-12);
    }

    #[test]
    fn single_document_uniform_idf() {
        let m = fit_tfidf(&[doc(&["x", "y", "x"])], raw_config()).unwrap();
        assert!(m.idf.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn min_df_threshold() {
        let cfg = TfidfConfig {
            min_df: 2,
            ..raw_config()
        };
        let m = fit_tfidf(&[doc(&["a", "b"]), doc(&["a"])], cfg).unwrap();
        assert_eq!(m.vocabulary.tokens, vec!["a"]);
        let cfg = TfidfConfig { min_df: 3, ..cfg };
        assert_eq!(fit_tfidf(&[doc(&["a", "b"]), doc(&["a"])], cfg), Err(Error::EmptyVocabulary(3)));
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert_eq!(fit_tfidf(&[doc(&[]), doc(&[])], raw_config()), Err(Error::EmptyCorpus));
    }

    #[test]
    fn transform_hand_values() {
        let m = fit_tfidf(&[doc(&["a", "b"]), doc(&["a"])], raw_config()).unwrap();
        let v = m.transform(&doc(&["a", "a", "b"]));
        assert_eq!(v.indices, vec![0, 1]);
        assert_eq!(v.values[0], 2.0);
        assert!((v.values[1] - 1.405_465_108_108_164_4).abs() < 1e-12);

        let norm = fit_tfidf(&[doc(&["a", "b"]), doc(&["a"])], TfidfConfig::default()).unwrap();
        let n = norm.transform(&doc(&["a", "a", "b"]));
        let scale = 1.0 / libm::sqrt(4.0 + 1.405_465_108_108_164_4f64.powi(2));
        assert!((n.values[0] - 2.0 * scale).abs() < 1e-12);
        assert!((n.norm() - 1.0).abs() < 1e-12);
        assert!(norm.transform(&doc(&["zzz"])).is_zero());
    }

    #[test]
    fn sublinear_and_bigrams() {
        let cfg = TfidfConfig {
            sublinear_tf: true,
            ngram_max: 2,
            ..raw_config()
        };
        let m = fit_tfidf(&[doc(&["a", "b", "a"])], cfg).unwrap();
        assert_eq!(m.vocabulary.tokens, vec!["a", "b", "a b", "b a"]);
        let v = m.transform(&doc(&["a", "a", "a"]));
        assert!((v.values[0] - (1.0 + libm::log(3.0))).abs() < 1e-12);
    }

    #[test]
    fn rarer_terms_have_larger_idf() {
        let m = fit_tfidf(&[doc(&["a", "b", "c"]), doc(&["a", "b"]), doc(&["a"])], raw_config()).unwrap();
        assert!(m.idf[0] < m.idf[1] && m.idf[1] < m.idf[2]);
    }
}
