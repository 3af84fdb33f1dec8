//! The sequence-model track: token ids with padding, an embedding layer, a
//! bidirectional LSTM, optional additive attention and a softmax head.
//!
//! Everything runs in `f64` with hand-written backpropagation through time,
//! so results are deterministic for a given seed and the gradients can be
//! verified against finite differences ([`gradient_check`]).
//!
//! Without attention the sentence summary is the last valid forward state
//! concatenated with the backward state at position 0. With attention the
//! score of each valid position is `v . tanh(W^T s_t + b)` and the summary is
//! the softmax-weighted sum of the states.

mod adam;
mod gradcheck;
mod network;
mod params;
mod train;
mod vocab;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use gradcheck::{gradient_check, relative_error, BlockCheck, GradCheckConfig, GradCheckReport};
pub use network::{attention, batch_loss, bilstm_forward, cross_entropy, forward_classify, loss_and_gradients, lstm_cell, probabilities, Example};
pub use params::{AttentionParams, Dims, HeadParams, LstmParams, Matrix, NeuralNetParams, GATE_ORDER};
pub use train::{
    encode_examples, fit_neural, majority_label, predict_logits, train, EarlyStopping, ModelKind, NeuralClassifier, NeuralEstimator,
    NeuralPrediction, TrainConfig, TrainTrace,
};
pub use vocab::{build_neural_vocab, encode_pad, percentile_length, NeuralVocab, PAD, UNK};
