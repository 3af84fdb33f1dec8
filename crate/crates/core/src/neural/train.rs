use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::adam::{adam_step, AdamConfig, AdamState};
use super::network::{batch_loss, forward_classify, loss_and_gradients, probabilities, Example};
use super::params::{Dims, NeuralNetParams};
use super::vocab::{build_neural_vocab, encode_pad, NeuralVocab};
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::eval::{Classifier, Estimator};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ModelKind {
    BiLstm,
    BiLstmAttention,
}

impl ModelKind {
    pub const ALL: [ModelKind; 2] = [ModelKind::BiLstm, ModelKind::BiLstmAttention];

    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::BiLstm => "bilstm",
            ModelKind::BiLstmAttention => "bilstm_attention",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::BiLstm => "BiLSTM",
            ModelKind::BiLstmAttention => "BiLSTM + Attention",
        }
    }

    pub fn parse(s: &str) -> Option<ModelKind> {
        match s {
            "bilstm" => Some(ModelKind::BiLstm),
            "bilstm_attention" | "bilstm_att" => Some(ModelKind::BiLstmAttention),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainConfig {
    pub batch_size: usize,
    pub embedding_dim: usize,
    /// Per direction.
    pub hidden_dim: usize,
    pub attention_dim: usize,
    pub adam: AdamConfig,
    pub max_epochs: usize,
    pub patience: usize,
    /// Minimum drop in validation loss that counts as improvement.
    pub min_delta: f64,
    pub seed: u64,
    pub max_seq_cap: usize,
    pub min_freq: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            batch_size: 32,
            embedding_dim: 128,
            hidden_dim: 64,
            attention_dim: 64,
            adam: AdamConfig::default(),
            max_epochs: 15,
            patience: 3,
            min_delta: 1e-4,
            seed: 42,
            max_seq_cap: 40,
            min_freq: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("batch_size", self.batch_size),
            ("embedding_dim", self.embedding_dim),
            ("hidden_dim", self.hidden_dim),
            ("attention_dim", self.attention_dim),
            ("max_epochs", self.max_epochs),
            ("patience", self.patience),
            ("max_seq_cap", self.max_seq_cap),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        if self.patience > self.max_epochs {
            return Err(Error::InvalidParameter(format!(
                "patience {} exceeds max_epochs {}",
                self.patience, self.max_epochs
            )));
        }
        let a = &self.adam;
        if !(a.learning_rate > 0.0 && a.epsilon > 0.0 && (0.0..1.0).contains(&a.beta1) && (0.0..1.0).contains(&a.beta2)) {
            return Err(Error::InvalidParameter(String::from("invalid Adam settings")));
        }
        if !(self.min_delta >= 0.0) {
            return Err(Error::InvalidParameter(String::from("min_delta must be non-negative")));
        }
        Ok(())
    }

    pub fn dims(&self, kind: ModelKind, vocab_size: usize) -> Dims {
        Dims {
            vocab: vocab_size,
            embed: self.embedding_dim,
            hidden: self.hidden_dim,
            attention: match kind {
                ModelKind::BiLstm => None,
                ModelKind::BiLstmAttention => Some(self.attention_dim),
            },
        }
    }
}

/// Patience-based stopping on a monitored loss. Epochs are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct EarlyStopping {
    pub patience: usize,
    pub min_delta: f64,
    pub best_loss: f64,
    pub best_epoch: usize,
    pub wait: usize,
}

impl EarlyStopping {
    pub fn new(patience: usize, min_delta: f64) -> Self {
        EarlyStopping {
            patience,
            min_delta,
            best_loss: f64::INFINITY,
            best_epoch: 0,
            wait: 0,
        }
    }

    /// Records an epoch's loss; true when training should stop. A loss
    /// counts as an improvement only if it beats the best by more than
    /// `min_delta`.
    pub fn observe(&mut self, epoch: usize, loss: f64) -> bool {
        if loss < self.best_loss - self.min_delta || self.best_epoch == 0 {
            self.best_loss = loss;
            self.best_epoch = epoch;
            self.wait = 0;
        } else {
            self.wait += 1;
        }
        self.wait >= self.patience
    }

    pub fn improved_at(&self, epoch: usize) -> bool {
        self.best_epoch == epoch
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainTrace {
    pub train_loss: Vec<f64>,
    pub val_loss: Vec<f64>,
    pub val_accuracy: Vec<f64>,
    pub stopped_epoch: usize,
    pub best_epoch: usize,
    /// Training examples skipped because they were empty.
    pub dropped_empty: usize,
}

/// Bullying wins ties.
pub fn predict_logits(logits: &[f64; 2]) -> Label {
    if logits[0] >= logits[1] {
        Label::Bullying
    } else {
        Label::NonBullying
    }
}

fn accuracy(params: &NeuralNetParams, set: &[Example]) -> Result<f64> {
    let mut correct = 0usize;
    for ex in set {
        if predict_logits(&forward_classify(&ex.ids, ex.valid_len, params)?) == ex.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / set.len() as f64)
}

/// Mini-batch Adam with early stopping on validation loss; returns the
/// parameters of the best epoch. Empty sequences are skipped. With no
/// usable validation examples the training loss is monitored instead.
pub fn train(kind: ModelKind, vocab_size: usize, train_set: &[Example], val_set: &[Example], config: &TrainConfig) -> Result<(NeuralNetParams, TrainTrace)> {
    config.validate()?;
    let dropped_empty = train_set.iter().filter(|e| e.valid_len == 0).count();
    let train_set: Vec<Example> = train_set.iter().filter(|e| e.valid_len > 0).cloned().collect();
    if train_set.is_empty() {
        return Err(Error::EmptyInput("no non-empty training sequences"));
    }
    let val_set: Vec<Example> = val_set.iter().filter(|e| e.valid_len > 0).cloned().collect();
    let monitor: &[Example] = if val_set.is_empty() { &train_set } else { &val_set };

    let mut params = NeuralNetParams::init(config.dims(kind, vocab_size), config.seed);
    let mut adam = AdamState::new(&params);
    let mut shuffler = SeededRng::new(config.seed.wrapping_add(1));
    let mut stopper = EarlyStopping::new(config.patience, config.min_delta);
    let mut best = params.clone();
    let mut trace = TrainTrace {
        dropped_empty,
        ..Default::default()
    };
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut batch: Vec<Example> = Vec::with_capacity(config.batch_size);

    for epoch in 1..=config.max_epochs {
        shuffler.shuffle(&mut order);
        let mut total = 0.0;
        for chunk in order.chunks(config.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| train_set[i].clone()));
            let (loss, grads) = loss_and_gradients(&params, &batch)?;
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss(epoch));
            }
            total += loss * batch.len() as f64;
            adam_step(&mut params, &grads, &mut adam, &config.adam);
        }
        trace.train_loss.push(total / train_set.len() as f64);
        let val_loss = batch_loss(&params, monitor)?;
        if !val_loss.is_finite() {
            return Err(Error::NonFiniteLoss(epoch));
        }
        trace.val_loss.push(val_loss);
        trace.val_accuracy.push(accuracy(&params, monitor)?);
        let stop = stopper.observe(epoch, val_loss);
        if stopper.improved_at(epoch) {
            best = params.clone();
        }
        trace.stopped_epoch = epoch;
        if stop {
            break;
        }
    }
    trace.best_epoch = stopper.best_epoch;
    Ok((best, trace))
}

/// A trained sequence model with its vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralClassifier {
    pub kind: ModelKind,
    pub vocab: NeuralVocab,
    pub params: NeuralNetParams,
    /// Returned for documents with no tokens.
    pub majority: Label,
}

/// A prediction plus whether the empty-document fallback was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuralPrediction {
    pub label: Label,
    /// Probability of the bullying class.
    pub score: f64,
    pub fallback: bool,
}

impl NeuralClassifier {
    pub fn predict_detailed(&self, doc: &[String]) -> NeuralPrediction {
        let (ids, len) = encode_pad(doc, &self.vocab);
        if len == 0 {
            return NeuralPrediction {
                label: self.majority,
                score: if self.majority == Label::Bullying { 1.0 } else { 0.0 },
                fallback: true,
            };
        }
        match forward_classify(&ids, len, &self.params) {
            Ok(logits) => NeuralPrediction {
                label: predict_logits(&logits),
                score: probabilities(&logits)[0],
                fallback: false,
            },
            Err(_) => NeuralPrediction {
                label: self.majority,
                score: 0.5,
                fallback: true,
            },
        }
    }
}

impl Classifier for NeuralClassifier {
    fn predict(&self, doc: &[String]) -> Label {
        self.predict_detailed(doc).label
    }
}

/// Majority label, lower id on ties.
pub fn majority_label(labels: &[Label]) -> Label {
    let bullying = labels.iter().filter(|&&l| l == Label::Bullying).count();
    if 2 * bullying >= labels.len() {
        Label::Bullying
    } else {
        Label::NonBullying
    }
}

pub fn encode_examples<D: AsRef<[String]>>(docs: &[D], labels: &[Label], vocab: &NeuralVocab) -> Vec<Example> {
    docs.iter()
        .zip(labels)
        .map(|(d, &label)| {
            let (ids, valid_len) = encode_pad(d.as_ref(), vocab);
            Example { ids, valid_len, label }
        })
        .collect()
}

/// Builds the vocabulary from the training documents, encodes both sets and
/// trains.
pub fn fit_neural<D: AsRef<[String]>, V: AsRef<[String]>>(
    kind: ModelKind,
    train_docs: &[D],
    train_labels: &[Label],
    val_docs: &[V],
    val_labels: &[Label],
    config: &TrainConfig,
) -> Result<(NeuralClassifier, TrainTrace)> {
    if train_docs.len() != train_labels.len() {
        return Err(Error::LengthMismatch(train_docs.len(), train_labels.len()));
    }
    if val_docs.len() != val_labels.len() {
        return Err(Error::LengthMismatch(val_docs.len(), val_labels.len()));
    }
    let vocab = build_neural_vocab(train_docs, config.min_freq, config.max_seq_cap)?;
    let train_set = encode_examples(train_docs, train_labels, &vocab);
    let val_set = encode_examples(val_docs, val_labels, &vocab);
    let (params, trace) = train(kind, vocab.size(), &train_set, &val_set, config)?;
    Ok((
        NeuralClassifier {
            kind,
            vocab,
            params,
            majority: majority_label(train_labels),
        },
        trace,
    ))
}

/// Cross-validation adapter: trains without a held-out set, monitoring the
/// training loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuralEstimator {
    pub kind: ModelKind,
    pub config: TrainConfig,
}

impl Estimator for NeuralEstimator {
    type Model = NeuralClassifier;

    fn fit(&self, docs: &[&[String]], labels: &[Label]) -> Result<NeuralClassifier> {
        let none: [&[String]; 0] = [];
        Ok(fit_neural(self.kind, docs, labels, &none, &[], &self.config)?.0)
    }
}
