use alloc::string::String;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("invalid lexicon: {0}")]
    InvalidLexicon(String),
    #[error("invalid stemmer rules, line {line}: {message}")]
    InvalidRules { line: usize, message: String },
    #[error("empty corpus after preprocessing")]
    EmptyCorpus,
    #[error("empty vocabulary after applying min_df = {0}")]
    EmptyVocabulary(usize),
    #[error("class {0} has no training documents")]
    EmptyClass(&'static str),
    #[error("invalid hyperparameter: {0}")]
    InvalidParameter(String),
    #[error("unknown model family: {0}")]
    UnknownFamily(String),
    #[error("non-finite loss at iteration {0}")]
    NonFiniteLoss(usize),
    #[error("non-finite gradient in parameter block {0}")]
    NonFiniteGradient(&'static str),
    #[error("attention over empty sequence")]
    EmptySequence,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
