//! Run configuration file (TOML). Every key is optional; unknown keys are
//! rejected. Command-line flags override the file, which overrides the
//! built-in defaults.
//!
//! ```toml
//! seed = 42
//!
//! [corpus]
//! path = "data/comments.csv"
//! delimiter = ";"
//! [corpus.columns]
//! text = "komentar"
//!
//! [lexicon]
//! slang = "slang.tsv"
//! stopwords = "stopwords.txt"
//! roots = "roots.txt"
//! stemmer_rules = "rules.txt"
//!
//! [pipeline]
//! stem = false
//!
//! [model]
//! family = "lr"
//! [model.params]
//! l2_lambda = 0.001
//!
//! [tfidf]
//! sublinear_tf = true
//!
//! [cv]
//! folds = 5
//! objective = "weighted_f1"
//! nb_raw_counts = false
//!
//! [grid.logistic_regression]
//! l2_lambda = [0.0001, 0.001, 0.01]
//!
//! [split]
//! train = 0.8
//! val = 0.1
//! test = 0.1
//!
//! [neural]
//! hidden_dim = 64
//! max_epochs = 15
//!
//! [output]
//! dir = "out"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rundung_core::corpus::SplitSpec;
use rundung_core::eval::{BenchmarkConfig, Objective};
use rundung_core::features::TfidfConfig;
use rundung_core::linear::{Family, ParamGrid, ParamSet};
use rundung_core::neural::TrainConfig;
use rundung_core::preprocess::PipelineConfig;
use serde::Deserialize;

use crate::csv_io::ColumnMap;
use crate::error::{AppError, AppResult};
use crate::lexicons::LexiconPaths;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    #[serde(default)]
    pub corpus: CorpusSection,
    #[serde(default)]
    pub lexicon: LexiconSection,
    #[serde(default)]
    pub pipeline: PipelineSection,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub tfidf: TfidfSection,
    #[serde(default)]
    pub cv: CvSection,
    #[serde(default)]
    pub grid: BTreeMap<String, BTreeMap<String, Vec<f64>>>,
    #[serde(default)]
    pub split: SplitSection,
    #[serde(default)]
    pub neural: NeuralSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSection {
    pub path: Option<PathBuf>,
    pub delimiter: Option<char>,
    pub columns: Option<ColumnMap>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconSection {
    pub slang: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub roots: Option<PathBuf>,
    pub stemmer_rules: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSection {
    pub case_fold: Option<bool>,
    pub clean: Option<bool>,
    pub normalize_slang: Option<bool>,
    pub remove_stopwords: Option<bool>,
    pub stem: Option<bool>,
    pub tokenize: Option<bool>,
    pub elongation_threshold: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub family: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfidfSection {
    pub sublinear_tf: Option<bool>,
    pub l2_normalize: Option<bool>,
    pub min_df: Option<usize>,
    pub use_idf: Option<bool>,
    pub ngram_max: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvSection {
    pub folds: Option<usize>,
    pub objective: Option<String>,
    pub nb_raw_counts: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSection {
    pub train: Option<f64>,
    pub val: Option<f64>,
    pub test: Option<f64>,
    pub stratified: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeuralSection {
    pub batch_size: Option<usize>,
    pub embedding_dim: Option<usize>,
    pub hidden_dim: Option<usize>,
    pub attention_dim: Option<usize>,
    pub learning_rate: Option<f64>,
    pub max_epochs: Option<usize>,
    pub patience: Option<usize>,
    pub min_delta: Option<f64>,
    pub max_seq_len: Option<usize>,
    pub min_freq: Option<usize>,
    pub skip_stop_and_stem: Option<bool>,
    pub enabled: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

fn resolve(base: &Path, p: &Option<PathBuf>) -> Option<PathBuf> {
    p.as_ref().map(|p| if p.is_absolute() { p.clone() } else { base.join(p) })
}

impl RunConfig {
    pub fn parse(text: &str) -> AppResult<Self> {
        toml::from_str(text).map_err(|e| AppError::Usage(format!("config: {e}")))
    }

    /// Reads a config file; relative paths inside it are resolved against
    /// the file's directory and must exist.
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.corpus.path = resolve(base, &cfg.corpus.path);
        let l = &mut cfg.lexicon;
        l.slang = resolve(base, &l.slang);
        l.stopwords = resolve(base, &l.stopwords);
        l.roots = resolve(base, &l.roots);
        l.stemmer_rules = resolve(base, &l.stemmer_rules);
        cfg.output.dir = resolve(base, &cfg.output.dir);
        if let Some(p) = &cfg.corpus.path {
            if !p.is_file() {
                return Err(AppError::Usage(format!("config: corpus file not found: {}", p.display())));
            }
        }
        cfg.lexicon_paths().check_exist()?;
        Ok(cfg)
    }

    pub fn lexicon_paths(&self) -> LexiconPaths {
        LexiconPaths {
            slang: self.lexicon.slang.clone(),
            stopwords: self.lexicon.stopwords.clone(),
            roots: self.lexicon.roots.clone(),
            stemmer_rules: self.lexicon.stemmer_rules.clone(),
        }
    }

    pub fn delimiter(&self) -> AppResult<u8> {
        match self.corpus.delimiter {
            None => Ok(b';'),
            Some(c) if c.is_ascii() => Ok(c as u8),
            Some(c) => Err(AppError::Usage(format!("config: delimiter {c:?} is not ASCII"))),
        }
    }

    pub fn columns(&self) -> ColumnMap {
        self.corpus.columns.clone().unwrap_or_default()
    }

    pub fn pipeline(&self) -> PipelineConfig {
        let d = PipelineConfig::default();
        let p = &self.pipeline;
        PipelineConfig {
            case_fold: p.case_fold.unwrap_or(d.case_fold),
            clean: p.clean.unwrap_or(d.clean),
            normalize_slang: p.normalize_slang.unwrap_or(d.normalize_slang),
            remove_stopwords: p.remove_stopwords.unwrap_or(d.remove_stopwords),
            stem: p.stem.unwrap_or(d.stem),
            tokenize: p.tokenize.unwrap_or(d.tokenize),
            elongation_threshold: p.elongation_threshold.unwrap_or(d.elongation_threshold),
        }
    }

    pub fn tfidf(&self) -> TfidfConfig {
        let d = TfidfConfig::default();
        let t = &self.tfidf;
        TfidfConfig {
            sublinear_tf: t.sublinear_tf.unwrap_or(d.sublinear_tf),
            l2_normalize: t.l2_normalize.unwrap_or(d.l2_normalize),
            min_df: t.min_df.unwrap_or(d.min_df),
            use_idf: t.use_idf.unwrap_or(d.use_idf),
            ngram_max: t.ngram_max.unwrap_or(d.ngram_max),
        }
    }

    pub fn model_params(&self) -> ParamSet {
        ParamSet(self.model.params.iter().map(|(k, v)| (k.clone(), *v)).collect())
    }

    pub fn objective(&self) -> AppResult<Objective> {
        match &self.cv.objective {
            None => Ok(Objective::default()),
            Some(s) => Objective::parse(s).ok_or_else(|| AppError::Usage(format!("config: unknown objective {s:?}"))),
        }
    }

    /// The configured grid for `family`, or its default search space.
    pub fn grid(&self, family: Family) -> AppResult<ParamGrid> {
        let mut found = None;
        for (name, axes) in &self.grid {
            let f = Family::parse(name).map_err(|e| AppError::Usage(format!("config: grid: {e}")))?;
            if f == family {
                let mut g = ParamGrid::new();
                for (axis, values) in axes {
                    if !family.param_names().contains(&axis.as_str()) {
                        return Err(AppError::Usage(format!("config: {} has no parameter {axis:?}", family.tag())));
                    }
                    g = g.axis(axis, values);
                }
                found = Some(g);
            }
        }
        Ok(found.unwrap_or_else(|| family.default_grid()))
    }

    pub fn split(&self, seed: u64) -> SplitSpec {
        let d = SplitSpec::default();
        SplitSpec {
            train_fraction: self.split.train.unwrap_or(d.train_fraction),
            val_fraction: self.split.val.unwrap_or(d.val_fraction),
            test_fraction: self.split.test.unwrap_or(d.test_fraction),
            seed,
            stratified: self.split.stratified.unwrap_or(d.stratified),
        }
    }

    pub fn train_config(&self, seed: u64) -> TrainConfig {
        let d = TrainConfig::default();
        let n = &self.neural;
        let mut adam = d.adam;
        adam.learning_rate = n.learning_rate.unwrap_or(adam.learning_rate);
        TrainConfig {
            batch_size: n.batch_size.unwrap_or(d.batch_size),
            embedding_dim: n.embedding_dim.unwrap_or(d.embedding_dim),
            hidden_dim: n.hidden_dim.unwrap_or(d.hidden_dim),
            attention_dim: n.attention_dim.unwrap_or(d.attention_dim),
            adam,
            max_epochs: n.max_epochs.unwrap_or(d.max_epochs),
            patience: n.patience.unwrap_or(d.patience),
            min_delta: n.min_delta.unwrap_or(d.min_delta),
            seed,
            max_seq_cap: n.max_seq_len.unwrap_or(d.max_seq_cap),
            min_freq: n.min_freq.unwrap_or(d.min_freq),
        }
    }

    /// Benchmark settings after applying the effective seed and fold count.
    pub fn benchmark(&self, seed: u64, folds: usize) -> AppResult<BenchmarkConfig> {
        let mut grids = Vec::new();
        for f in Family::ALL {
            grids.push((f, self.grid(f)?));
        }
        let mut cfg = BenchmarkConfig {
            folds,
            grids,
            tfidf: self.tfidf(),
            nb_raw_counts: self.cv.nb_raw_counts.unwrap_or(false),
            objective: self.objective()?,
            run_neural: self.neural.enabled.unwrap_or(true),
            ..Default::default()
        }
        .with_seed(seed);
        cfg.neural.train = self.train_config(seed);
        cfg.neural.split = self.split(seed);
        cfg.neural.skip_stop_and_stem = self.neural.skip_stop_and_stem.unwrap_or(false);
        Ok(cfg)
    }
}
