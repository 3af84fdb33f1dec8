use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const PAD: usize = 0;
pub const UNK: usize = 1;

/// Token ids for the sequence models. Ids 0 and 1 are reserved for padding
/// and unknown tokens; the rest are dense from 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeuralVocab {
    pub token_to_id: BTreeMap<String, usize>,
    /// Tokens with id >= 2, in id order (`tokens[i]` has id `i + 2`).
    pub tokens: Vec<String>,
    pub max_seq_len: usize,
}

impl NeuralVocab {
    /// Number of embedding rows, reserved ids included.
    pub fn size(&self) -> usize {
        self.tokens.len() + 2
    }

    pub fn id(&self, token: &str) -> usize {
        self.token_to_id.get(token).copied().unwrap_or(UNK)
    }

    /// Rebuilds the lookup from tokens listed in id order.
    pub fn from_tokens(tokens: Vec<String>, max_seq_len: usize) -> Self {
        let token_to_id = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i + 2)).collect();
        NeuralVocab {
            token_to_id,
            tokens,
            max_seq_len,
        }
    }
}

/// Nearest-rank percentile of `lengths` (`p` in (0, 1]).
pub fn percentile_length(lengths: &[usize], p: f64) -> usize {
    if lengths.is_empty() {
        return 0;
    }
    let mut sorted = lengths.to_vec();
    sorted.sort_unstable();
    let rank = libm::ceil(p * sorted.len() as f64) as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Assigns ids by descending frequency (ties lexicographic) to tokens seen at
/// least `min_freq` times. `max_seq_len` is the 95th-percentile training
/// length, capped at `cap` and at least 1.
pub fn build_neural_vocab<D: AsRef<[String]>>(token_lists: &[D], min_freq: usize, cap: usize) -> Result<NeuralVocab> {
    if token_lists.iter().all(|d| d.as_ref().is_empty()) {
        return Err(Error::EmptyInput("no training tokens for the neural vocabulary"));
    }
    let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in token_lists {
        for t in doc.as_ref() {
            *freq.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = freq.into_iter().filter(|&(_, c)| c >= min_freq.max(1)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let tokens = ranked.into_iter().map(|(t, _)| String::from(t)).collect();
    let lengths: Vec<usize> = token_lists.iter().map(|d| d.as_ref().len()).collect();
    let max_seq_len = percentile_length(&lengths, 0.95).min(cap).max(1);
    Ok(NeuralVocab::from_tokens(tokens, max_seq_len))
}

/// Maps tokens to ids (UNK for unseen), truncates to `max_seq_len` and pads
/// at the end. Returns the ids and the unpadded length.
pub fn encode_pad(tokens: &[String], vocab: &NeuralVocab) -> (Vec<usize>, usize) {
    let mut ids = vec![PAD; vocab.max_seq_len];
    let n = tokens.len().min(vocab.max_seq_len);
    for (slot, t) in ids.iter_mut().zip(&tokens[..n]) {
        *slot = vocab.id(t);
    }
    (ids, n)
}
