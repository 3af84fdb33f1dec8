//! The six-stage preprocessing pipeline for informal Indonesian comments.
//!
//! Stages always run in this order, each one individually switchable:
//!
//! 1. case folding
//! 2. cleaning (URLs, mentions, hashtags, non-letters)
//! 3. slang normalization (elongation collapse, then dictionary lookup)
//! 4. stopword removal
//! 5. stemming
//! 6. tokenization
//!
//! Stages 3–5 are word-level, so the cleaned text is split on whitespace
//! before them; stage 6 materializes the final token list. A slang entry may
//! expand to several words, each of which then goes through stages 4 and 5.
//! When stopword removal is on, a stem that lands on a stopword is dropped as
//! well, so no output token is ever a stopword.

mod lexicon;
mod stemmer;
mod text;

use alloc::string::String;
use alloc::vec::Vec;

pub use lexicon::{parse_slang_map, parse_word_list, NormalizationLexicon};
pub use stemmer::{PrefixForm, PrefixRule, StemmerRules, UnknownWordPolicy, DEFAULT_RULES};
pub use text::{case_fold, clean, collapse_elongation, tokenize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    CaseFold,
    Clean,
    SlangNormalization,
    StopwordRemoval,
    Stemming,
    Tokenization,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::CaseFold,
        Stage::Clean,
        Stage::SlangNormalization,
        Stage::StopwordRemoval,
        Stage::Stemming,
        Stage::Tokenization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::CaseFold => "case_fold",
            Stage::Clean => "clean",
            Stage::SlangNormalization => "normalize_slang",
            Stage::StopwordRemoval => "remove_stopwords",
            Stage::Stemming => "stem",
            Stage::Tokenization => "tokenize",
        }
    }
}

/// Stage switches. The order is fixed; only on/off is configurable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PipelineConfig {
    pub case_fold: bool,
    pub clean: bool,
    pub normalize_slang: bool,
    pub remove_stopwords: bool,
    pub stem: bool,
    pub tokenize: bool,
    /// Letter runs at least this long collapse to one letter.
    pub elongation_threshold: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            case_fold: true,
            clean: true,
            normalize_slang: true,
            remove_stopwords: true,
            stem: true,
            tokenize: true,
            elongation_threshold: 3,
        }
    }
}

impl PipelineConfig {
    pub fn enabled(&self, stage: Stage) -> bool {
        match stage {
            Stage::CaseFold => self.case_fold,
            Stage::Clean => self.clean,
            Stage::SlangNormalization => self.normalize_slang,
            Stage::StopwordRemoval => self.remove_stopwords,
            Stage::Stemming => self.stem,
            Stage::Tokenization => self.tokenize,
        }
    }

    pub fn set(&mut self, stage: Stage, on: bool) {
        match stage {
            Stage::CaseFold => self.case_fold = on,
            Stage::Clean => self.clean = on,
            Stage::SlangNormalization => self.normalize_slang = on,
            Stage::StopwordRemoval => self.remove_stopwords = on,
            Stage::Stemming => self.stem = on,
            Stage::Tokenization => self.tokenize = on,
        }
    }

    /// The same configuration without stopword removal and stemming.
    pub fn without_stop_and_stem(mut self) -> Self {
        self.remove_stopwords = false;
        self.stem = false;
        self
    }
}

/// Elongation collapse followed by an exact slang lookup. Unknown words pass
/// through; the result may hold several space-separated words.
pub fn normalize_slang(word: &str, lexicon: &NormalizationLexicon, elongation_threshold: usize) -> String {
    let collapsed = collapse_elongation(word, elongation_threshold);
    match lexicon.slang(&collapsed) {
        Some(canonical) => String::from(canonical),
        None => collapsed,
    }
}

/// Drops stopwords, keeping the order of the rest.
pub fn remove_stopwords(tokens: Vec<String>, lexicon: &NormalizationLexicon) -> Vec<String> {
    tokens.into_iter().filter(|t| !lexicon.is_stopword(t)).collect()
}

/// Intermediate text after each stage, for inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageTrace {
    pub raw: String,
    /// One entry per [`Stage::ALL`], rendered as space-joined text.
    pub after: [String; 6],
    pub tokens: Vec<String>,
}

/// A configured pipeline with its lexicon and stemmer rules.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    pub config: PipelineConfig,
    pub lexicon: NormalizationLexicon,
    pub rules: StemmerRules,
}

impl Preprocessor {
    pub fn new(config: PipelineConfig, lexicon: NormalizationLexicon, rules: StemmerRules) -> Self {
        Preprocessor { config, lexicon, rules }
    }

    pub fn with_config(&self, config: PipelineConfig) -> Self {
        Preprocessor {
            config,
            lexicon: self.lexicon.clone(),
            rules: self.rules.clone(),
        }
    }

    /// Runs the enabled stages and returns the token list.
    pub fn run(&self, text: &str) -> Vec<String> {
        self.run_stages(text, None)
    }

    /// Like [`run`](Self::run), also recording the text after every stage
    /// (a disabled stage repeats its input).
    pub fn trace(&self, text: &str) -> StageTrace {
        let mut after: [String; 6] = Default::default();
        let tokens = self.run_stages(text, Some(&mut after));
        StageTrace {
            raw: String::from(text),
            after,
            tokens,
        }
    }

    fn run_stages(&self, text: &str, mut record: Option<&mut [String; 6]>) -> Vec<String> {
        let cfg = &self.config;
        let mut note = |stage: Stage, s: &str| {
            if let Some(r) = record.as_deref_mut() {
                r[stage as usize] = String::from(s);
            }
        };

        let folded = if cfg.case_fold { case_fold(text) } else { String::from(text) };
        note(Stage::CaseFold, &folded);
        let cleaned = if cfg.clean { clean(&folded) } else { folded };
        note(Stage::Clean, &cleaned);

        let mut words = tokenize(&cleaned);
        if cfg.normalize_slang {
            words = words
                .iter()
                .flat_map(|w| {
                    tokenize(&normalize_slang(w, &self.lexicon, cfg.elongation_threshold))
                })
                .collect();
        }
        note(Stage::SlangNormalization, &words.join(" "));
        if cfg.remove_stopwords {
            words = remove_stopwords(words, &self.lexicon);
        }
        note(Stage::StopwordRemoval, &words.join(" "));
        if cfg.stem {
            words = words
                .iter()
                .map(|w| self.rules.stem(w, &self.lexicon))
                .filter(|s| !(cfg.remove_stopwords && self.lexicon.is_stopword(s)))
                .collect();
        }
        let joined = words.join(" ");
        note(Stage::Stemming, &joined);
        let tokens = if cfg.tokenize {
            words
        } else if joined.is_empty() {
            Vec::new()
        } else {
            alloc::vec![joined.clone()]
        };
        note(Stage::Tokenization, &tokens.join(" | "));
        tokens
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    fn lexicon(stop: &[&str], roots: &[&str]) -> NormalizationLexicon {
        NormalizationLexicon::new(
            vec![(s("bgt"), s("banget")), (s("b3go"), s("bego")), (s("gpp"), s("tidak apa apa"))],
            stop.iter().map(|w| s(w)),
            roots.iter().map(|w| s(w)),
        )
        .unwrap()
    }

    fn pre(stop: &[&str], roots: &[&str]) -> Preprocessor {
        Preprocessor::new(PipelineConfig::default(), lexicon(stop, roots), StemmerRules::default())
    }

    #[test]
    fn slang_examples() {
        let lex = lexicon(&[], &[]);
        assert_eq!(normalize_slang("bgt", &lex, 3), "banget");
        assert_eq!(normalize_slang("kamu", &lex, 3), "kamu");
        assert_eq!(normalize_slang("bgttt", &lex, 3), "banget");
    }

    #[test]
    fn stopword_examples() {
        let lex = lexicon(&["yang"], &[]);
        assert_eq!(remove_stopwords(vec![s("yang"), s("jelek")], &lex), vec!["jelek"]);
        assert!(remove_stopwords(vec![], &lex).is_empty());
        assert!(remove_stopwords(vec![s("yang"), s("yang")], &lex).is_empty());
    }

    #[test]
    fn full_pipeline_trace() {
        let p = pre(&[], &["jelek"]);
        assert_eq!(p.run("@bu_dewi Jelekkk bgt sihhh!!"), vec!["jelek", "banget", "sih"]);
        assert_eq!(p.run("jelek"), vec!["jelek"]);
    }

    #[test]
    fn configured_stopwords_are_removed() {
        let p = pre(&["banget", "kak"], &["keren"]);
        assert_eq!(p.run("Keren banget kak"), vec!["keren"]);
    }

    #[test]
    fn stage_order_is_fixed() {
        // "bgt" only becomes a stopword after normalization, so it disappears
        // exactly because stopword removal comes after slang normalization.
        let p = pre(&["banget"], &[]);
        assert_eq!(p.run("jelek bgt"), vec!["jelek"]);
        let mut no_slang = PipelineConfig::default();
        no_slang.normalize_slang = false;
        assert_eq!(p.with_config(no_slang).run("jelek bgt"), vec!["jelek", "bgt"]);
    }

    #[test]
    fn leetspeak_only_via_slang_entries() {
        let p = pre(&[], &[]);
        // Cleaning runs before slang lookup, so digits are already gone.
        assert_eq!(p.run("b3go"), vec!["b", "go"]);
        let mut cfg = PipelineConfig::default();
        cfg.clean = false;
        assert_eq!(p.with_config(cfg).run("b3go"), vec!["bego"]);
    }

    #[test]
    fn multiword_slang_expansion() {
        let p = pre(&["apa"], &[]);
        assert_eq!(p.run("gpp kok"), vec!["tidak", "kok"]);
    }

    #[test]
    fn stems_that_are_stopwords_are_dropped() {
        let p = pre(&["ada"], &["ada"]);
        assert!(p.run("adanya").is_empty());
    }

    #[test]
    fn trace_has_six_columns() {
        let p = pre(&[], &["jelek"]);
        let t = p.trace("Jelekkk BGT");
        assert_eq!(t.after[0], "jelekkk bgt");
        assert_eq!(t.after[1], "jelekkk bgt");
        assert_eq!(t.after[2], "jelek banget");
        assert_eq!(t.tokens, vec!["jelek", "banget"]);
    }

    #[test]
    fn untokenized_output_is_one_token() {
        let mut cfg = PipelineConfig::default();
        cfg.tokenize = false;
        let p = pre(&[], &[]).with_config(cfg);
        assert_eq!(p.run("halo kak"), vec!["halo kak"]);
        assert!(p.run("!!").is_empty());
    }

    proptest! {
        #[test]
        fn output_tokens_are_lowercase_words(text in "[ -~\\u{00e0}-\\u{00ff}\\u{1F600}-\\u{1F64F}]{0,60}") {
            let p = pre(&["yang", "di"], &["jelek", "makan"]);
            let tokens = p.run(&text);
            for t in &tokens {
                prop_assert!(!t.is_empty());
                prop_assert!(t.chars().all(|c| c.is_ascii_lowercase()));
                prop_assert!(!p.lexicon.is_stopword(t));
            }
            let again = p.run(&tokens.join(" "));
            prop_assert_eq!(again, tokens);
        }
    }
}
