//! Core algorithms for detecting cyberbullying in Indonesian social-media
//! comments.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`corpus`]: comment records, descriptive statistics, seeded splits.
//! * [`preprocess`]: the six-stage text pipeline (case folding, cleaning,
//!   slang normalization, stopword removal, stemming, tokenization).
//! * [`features`]: vocabulary and TF-IDF sparse vectors.
//! * [`linear`]: multinomial Naive Bayes, logistic regression, a Pegasos
//!   linear SVM and grid search over them.
//! * [`neural`]: a BiLSTM classifier with optional additive attention,
//!   hand-written backpropagation and Adam.
//! * [`eval`]: confusion matrices, metrics, cross-validation and the full
//!   benchmark run.
//!
//! File formats, the CLI and anything touching the filesystem live in the
//! companion `rundung` crate.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose so NaN fails parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod linear;
pub mod math;
pub mod neural;
pub mod preprocess;
pub mod rng;

pub use corpus::{CommentRecord, Label};
pub use error::{Error, Result};
