//! Lexicon and stemmer-rule files, with bundled defaults.

use std::path::{Path, PathBuf};

use rundung_core::preprocess::{NormalizationLexicon, PipelineConfig, Preprocessor, StemmerRules, DEFAULT_RULES};
use sha2::{Digest, Sha256};

use crate::error::{AppError, AppResult};

pub const DEFAULT_SLANG: &str = include_str!("../data/slang.tsv");
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");
pub const DEFAULT_ROOTS: &str = include_str!("../data/roots.txt");

/// Optional overrides; `None` selects the bundled file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexiconPaths {
    pub slang: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub roots: Option<PathBuf>,
    pub stemmer_rules: Option<PathBuf>,
}

/// The text of every lexicon source, kept for fingerprinting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconSources {
    pub slang: String,
    pub stopwords: String,
    pub roots: String,
    pub stemmer_rules: String,
}

fn read_or(path: &Option<PathBuf>, default: &str) -> AppResult<String> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| AppError::io(p, e)),
        None => Ok(default.to_string()),
    }
}

impl LexiconPaths {
    /// Fails if any configured file is missing.
    pub fn check_exist(&self) -> AppResult<()> {
        for p in [&self.slang, &self.stopwords, &self.roots, &self.stemmer_rules].into_iter().flatten() {
            if !p.is_file() {
                return Err(AppError::Usage(format!("lexicon file not found: {}", p.display())));
            }
        }
        Ok(())
    }

    pub fn read(&self) -> AppResult<LexiconSources> {
        self.check_exist()?;
        Ok(LexiconSources {
            slang: read_or(&self.slang, DEFAULT_SLANG)?,
            stopwords: read_or(&self.stopwords, DEFAULT_STOPWORDS)?,
            roots: read_or(&self.roots, DEFAULT_ROOTS)?,
            stemmer_rules: read_or(&self.stemmer_rules, DEFAULT_RULES)?,
        })
    }
}

impl LexiconSources {
    pub fn bundled() -> Self {
        LexiconSources {
            slang: DEFAULT_SLANG.into(),
            stopwords: DEFAULT_STOPWORDS.into(),
            roots: DEFAULT_ROOTS.into(),
            stemmer_rules: DEFAULT_RULES.into(),
        }
    }

    pub fn build(&self, config: PipelineConfig) -> AppResult<Preprocessor> {
        let lexicon = NormalizationLexicon::from_texts(&self.slang, &self.stopwords, &self.roots)
            .map_err(|e| AppError::Usage(e.to_string()))?;
        let rules = StemmerRules::parse(&self.stemmer_rules).map_err(|e| AppError::Usage(e.to_string()))?;
        Ok(Preprocessor::new(config, lexicon, rules))
    }

    /// SHA-256 over the four sources and the stage switches.
    pub fn fingerprint(&self, config: &PipelineConfig) -> String {
        let mut h = Sha256::new();
        for (name, text) in [
            ("slang", &self.slang),
            ("stopwords", &self.stopwords),
            ("roots", &self.roots),
            ("stemmer_rules", &self.stemmer_rules),
        ] {
            h.update(name.as_bytes());
            h.update((text.len() as u64).to_le_bytes());
            h.update(text.as_bytes());
        }
        h.update(pipeline_line(config).as_bytes());
        hex(&h.finalize())
    }
}

/// `case_fold=1 clean=1 ...` in stage order.
pub fn pipeline_line(c: &PipelineConfig) -> String {
    let b = |v: bool| if v { 1 } else { 0 };
    format!(
        "case_fold={} clean={} normalize_slang={} remove_stopwords={} stem={} tokenize={} elongation_threshold={}",
        b(c.case_fold),
        b(c.clean),
        b(c.normalize_slang),
        b(c.remove_stopwords),
        b(c.stem),
        b(c.tokenize),
        c.elongation_threshold
    )
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

pub fn path_or_bundled(p: &Option<PathBuf>) -> String {
    p.as_deref().map(Path::display).map(|d| d.to_string()).unwrap_or_else(|| "(bundled)".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lexicons_build() {
        let p = LexiconSources::bundled().build(PipelineConfig::default()).unwrap();
        assert!(p.lexicon.slang_len() > 1000);
        assert_eq!(p.lexicon.slang("bgt"), Some("banget"));
        assert!(p.lexicon.is_stopword("yang"));
        assert!(p.lexicon.is_root("makan"));
    }

    #[test]
    fn fingerprint_tracks_flags_and_content() {
        let s = LexiconSources::bundled();
        let base = s.fingerprint(&PipelineConfig::default());
        assert_eq!(base, s.fingerprint(&PipelineConfig::default()));
        assert_ne!(base, s.fingerprint(&PipelineConfig::default().without_stop_and_stem()));
        let mut t = s.clone();
        t.stopwords.push_str("\nbaru\n");
        assert_ne!(base, t.fingerprint(&PipelineConfig::default()));
        assert_eq!(base.len(), 64);
    }

    #[test]
    fn missing_file_is_usage_error() {
        let paths = LexiconPaths {
            slang: Some("/nonexistent/slang.tsv".into()),
            ..Default::default()
        };
        assert_eq!(paths.read().unwrap_err().exit_code(), 1);
    }
}
