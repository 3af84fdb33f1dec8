//! Self-describing text model files.
//!
//! ```text
//! rundung-model
//! format_version 1
//! family <tag>
//! preprocessing_fingerprint <sha256 hex>
//! data_fingerprint <sha256 hex>
//! seed <u64>
//! pipeline case_fold=1 clean=1 ... elongation_threshold=3
//! meta <key> <value>            (zero or more, config echo)
//! section tfidf | section neural
//! ...
//! end
//! ```
//!
//! Reals are written in scientific notation with 12 significant digits.
//! A vector is a `vector <name> <len>` line followed by its values, eight
//! per line. Neural parameter blocks follow the fixed order of
//! [`NeuralNetParams::blocks`]: embedding, forward LSTM (input weights,
//! recurrent weights, bias), backward LSTM, attention (`w`, `b`, `v`) when
//! present, then the head (`w`, `b`). Matrices are row-major; LSTM gate
//! columns are ordered input, forget, output, candidate.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rundung_core::features::{TfidfConfig, TfidfModel, Vocabulary};
use rundung_core::linear::{Family, LinearModel, LinearSvmModel, LogisticRegressionModel, NaiveBayesModel, TfidfClassifier};
use rundung_core::neural::{Dims, ModelKind, NeuralClassifier, NeuralNetParams, NeuralVocab};
use rundung_core::preprocess::PipelineConfig;
use rundung_core::Label;

use crate::error::{AppError, AppResult};
use crate::lexicons::pipeline_line;

pub const MAGIC: &str = "rundung-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelBody {
    Linear(TfidfClassifier),
    Neural(NeuralClassifier),
}

impl ModelBody {
    pub fn family_tag(&self) -> &'static str {
        match self {
            ModelBody::Linear(c) => c.model.family().tag(),
            ModelBody::Neural(n) => n.kind.tag(),
        }
    }

    /// Label, bullying score and whether the empty-input fallback fired.
    pub fn predict(&self, tokens: &[String]) -> (Label, f64, bool) {
        match self {
            ModelBody::Linear(c) => {
                let (label, score) = c.predict_scored(tokens);
                (label, score, false)
            }
            ModelBody::Neural(n) => {
                let p = n.predict_detailed(tokens);
                (p.label, p.score, p.fallback)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelArtifact {
    pub preprocessing_fingerprint: String,
    pub data_fingerprint: String,
    pub seed: u64,
    /// Label used when a comment has no tokens left after preprocessing.
    pub majority: Label,
    pub pipeline: PipelineConfig,
    pub metadata: Vec<(String, String)>,
    pub body: ModelBody,
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:.11e}")
}

fn b(v: bool) -> u8 {
    u8::from(v)
}

struct Writer(String);

impl Writer {
    fn line(&mut self, s: impl AsRef<str>) {
        self.0.push_str(s.as_ref());
        self.0.push('\n');
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.0, "{key} {value}");
    }

    fn real(&mut self, key: &str, value: f64) {
        self.kv(key, fmt_real(value));
    }

    fn vector(&mut self, name: &str, values: &[f64]) {
        let _ = writeln!(self.0, "vector {name} {}", values.len());
        for chunk in values.chunks(8) {
            let row: Vec<String> = chunk.iter().map(|&v| fmt_real(v)).collect();
            self.line(row.join(" "));
        }
    }
}

impl ModelArtifact {
    pub fn family_tag(&self) -> &'static str {
        self.body.family_tag()
    }

    pub fn to_text(&self) -> String {
        let mut w = Writer(String::new());
        w.line(MAGIC);
        w.kv("format_version", FORMAT_VERSION);
        w.kv("family", self.family_tag());
        w.kv("preprocessing_fingerprint", &self.preprocessing_fingerprint);
        w.kv("data_fingerprint", &self.data_fingerprint);
        w.kv("seed", self.seed);
        w.kv("majority", self.majority.id());
        w.kv("pipeline", pipeline_line(&self.pipeline));
        for (k, v) in &self.metadata {
            w.line(format!("meta {k} {v}"));
        }
        match &self.body {
            ModelBody::Linear(c) => write_linear(&mut w, c),
            ModelBody::Neural(n) => write_neural(&mut w, n),
        }
        w.line("end");
        w.0
    }

    pub fn save(&self, path: &Path) -> AppResult<()> {
        std::fs::write(path, self.to_text()).map_err(|e| AppError::io(path, e))
    }

    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::parse(&text).map_err(|e| AppError::Format(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut r = Reader::new(text);
        if r.next()? != MAGIC {
            return Err("not a rundung model file".into());
        }
        let version: u32 = r.num("format_version")?;
        if version != FORMAT_VERSION {
            return Err(format!("unsupported format_version {version}, expected {FORMAT_VERSION}"));
        }
        let family = r.value("family")?.to_string();
        let preprocessing_fingerprint = r.value("preprocessing_fingerprint")?.to_string();
        let data_fingerprint = r.value("data_fingerprint")?.to_string();
        let seed = r.num("seed")?;
        let majority_id: usize = r.num("majority")?;
        if majority_id > 1 {
            return Err("majority label must be 0 or 1".into());
        }
        let pipeline = parse_pipeline(r.value("pipeline")?)?;
        let mut metadata = Vec::new();
        while r.peek().is_some_and(|l| l.starts_with("meta ")) {
            let rest = &r.next()?["meta ".len()..];
            let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
            metadata.push((k.to_string(), v.to_string()));
        }
        let body = match r.value("section")? {
            "tfidf" => ModelBody::Linear(read_linear(&mut r)?),
            "neural" => ModelBody::Neural(read_neural(&mut r)?),
            other => return Err(format!("unknown section {other:?}")),
        };
        if r.next()? != "end" {
            return Err(format!("line {}: expected end", r.pos));
        }
        if body.family_tag() != family {
            return Err(format!("family {family:?} does not match the model section"));
        }
        Ok(ModelArtifact {
            preprocessing_fingerprint,
            data_fingerprint,
            seed,
            majority: Label::from_id(majority_id),
            pipeline,
            metadata,
            body,
        })
    }
}

fn parse_pipeline(s: &str) -> Result<PipelineConfig, String> {
    let map: BTreeMap<&str, &str> = s.split_whitespace().filter_map(|kv| kv.split_once('=')).collect();
    let flag = |k: &str| match map.get(k) {
        Some(&"1") => Ok(true),
        Some(&"0") => Ok(false),
        _ => Err(format!("pipeline flag {k} missing or invalid")),
    };
    Ok(PipelineConfig {
        case_fold: flag("case_fold")?,
        clean: flag("clean")?,
        normalize_slang: flag("normalize_slang")?,
        remove_stopwords: flag("remove_stopwords")?,
        stem: flag("stem")?,
        tokenize: flag("tokenize")?,
        elongation_threshold: map
            .get("elongation_threshold")
            .and_then(|v| v.parse().ok())
            .ok_or("pipeline elongation_threshold missing")?,
    })
}

fn write_linear(w: &mut Writer, c: &TfidfClassifier) {
    w.kv("section", "tfidf");
    let cfg = &c.tfidf.config;
    w.kv("sublinear_tf", b(cfg.sublinear_tf));
    w.kv("l2_normalize", b(cfg.l2_normalize));
    w.kv("min_df", cfg.min_df);
    w.kv("use_idf", b(cfg.use_idf));
    w.kv("ngram_max", cfg.ngram_max);
    let v = &c.tfidf.vocabulary;
    w.kv("n_documents", v.n_documents);
    w.kv("vocabulary", v.len());
    for (i, t) in v.tokens.iter().enumerate() {
        w.line(format!("{t}\t{}\t{}", v.document_frequency[i], fmt_real(c.tfidf.idf[i])));
    }
    w.kv("model", c.model.family().tag());
    match &c.model {
        LinearModel::NaiveBayes(m) => {
            w.real("alpha", m.alpha);
            w.vector("log_prior", &m.log_prior);
            w.vector("log_likelihood.bullying", &m.log_likelihood[0]);
            w.vector("log_likelihood.non_bullying", &m.log_likelihood[1]);
        }
        LinearModel::Logistic(m) => {
            w.real("l2_lambda", m.l2_lambda);
            w.real("bias", m.bias);
            w.vector("weights", &m.weights);
        }
        LinearModel::Svm(m) => {
            w.real("reg_lambda", m.reg_lambda);
            w.real("bias", m.bias);
            w.vector("weights", &m.weights);
        }
    }
}

fn read_linear(r: &mut Reader) -> Result<TfidfClassifier, String> {
    let config = TfidfConfig {
        sublinear_tf: r.flag("sublinear_tf")?,
        l2_normalize: r.flag("l2_normalize")?,
        min_df: r.num("min_df")?,
        use_idf: r.flag("use_idf")?,
        ngram_max: r.num("ngram_max")?,
    };
    let n_documents = r.num("n_documents")?;
    let n: usize = r.num("vocabulary")?;
    let mut tokens = Vec::with_capacity(n);
    let mut document_frequency = Vec::with_capacity(n);
    let mut idf = Vec::with_capacity(n);
    for _ in 0..n {
        let line = r.next()?;
        let parts: Vec<&str> = line.split('\t').collect();
        if parts.len() != 3 {
            return Err(format!("line {}: expected token<TAB>df<TAB>idf", r.pos));
        }
        tokens.push(parts[0].to_string());
        document_frequency.push(parts[1].parse().map_err(|_| format!("line {}: bad df", r.pos))?);
        idf.push(parse_real(parts[2], r.pos)?);
    }
    let token_to_id = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let tfidf = TfidfModel {
        vocabulary: Vocabulary {
            token_to_id,
            tokens,
            document_frequency,
            n_documents,
        },
        idf,
        config,
    };
    let family = Family::parse(r.value("model")?).map_err(|e| e.to_string())?;
    let model = match family {
        Family::NaiveBayes => {
            let alpha = r.num("alpha")?;
            let prior = r.vector("log_prior", Some(2))?;
            let b = r.vector("log_likelihood.bullying", Some(n))?;
            let nb = r.vector("log_likelihood.non_bullying", Some(n))?;
            LinearModel::NaiveBayes(NaiveBayesModel {
                log_prior: [prior[0], prior[1]],
                log_likelihood: [b, nb],
                alpha,
            })
        }
        Family::LogisticRegression => {
            let l2_lambda = r.num("l2_lambda")?;
            let bias = r.num("bias")?;
            let weights = r.vector("weights", Some(n))?;
            LinearModel::Logistic(LogisticRegressionModel { weights, bias, l2_lambda })
        }
        Family::LinearSvm => {
            let reg_lambda = r.num("reg_lambda")?;
            let bias = r.num("bias")?;
            let weights = r.vector("weights", Some(n))?;
            LinearModel::Svm(LinearSvmModel { weights, bias, reg_lambda })
        }
    };
    Ok(TfidfClassifier { tfidf, model })
}

fn write_neural(w: &mut Writer, n: &NeuralClassifier) {
    w.kv("section", "neural");
    w.kv("kind", n.kind.tag());
    w.kv("majority", n.majority.id());
    let d = n.params.dims();
    w.kv("embedding_dim", d.embed);
    w.kv("hidden_dim", d.hidden);
    w.kv("attention_dim", d.attention.unwrap_or(0));
    w.kv("max_seq_len", n.vocab.max_seq_len);
    w.kv("vocabulary", n.vocab.tokens.len());
    for t in &n.vocab.tokens {
        w.line(t);
    }
    for (name, block) in n.params.blocks() {
        w.vector(name, block);
    }
}

fn read_neural(r: &mut Reader) -> Result<NeuralClassifier, String> {
    let kind = ModelKind::parse(r.value("kind")?).ok_or("unknown neural model kind")?;
    let majority_id: usize = r.num("majority")?;
    if majority_id > 1 {
        return Err("majority label must be 0 or 1".into());
    }
    let embed = r.num("embedding_dim")?;
    let hidden = r.num("hidden_dim")?;
    let attention_dim: usize = r.num("attention_dim")?;
    let max_seq_len = r.num("max_seq_len")?;
    let n: usize = r.num("vocabulary")?;
    let mut tokens = Vec::with_capacity(n);
    for _ in 0..n {
        tokens.push(r.next()?.to_string());
    }
    let attention = match kind {
        ModelKind::BiLstm => None,
        ModelKind::BiLstmAttention => Some(attention_dim),
    };
    let mut params = NeuralNetParams::zeros(Dims {
        vocab: n + 2,
        embed,
        hidden,
        attention,
    });
    for (name, block) in params.blocks_mut() {
        let values = r.vector(name, Some(block.len()))?;
        block.copy_from_slice(&values);
    }
    Ok(NeuralClassifier {
        kind,
        vocab: NeuralVocab::from_tokens(tokens, max_seq_len),
        params,
        majority: Label::from_id(majority_id),
    })
}

fn parse_real(s: &str, line: usize) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("line {line}: bad number {s:?}")),
    }
}

struct Reader<'a> {
    lines: Vec<&'a str>,
    /// 1-based number of the last line returned.
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
            lines: text.lines().collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Result<&'a str, String> {
        let l = self.peek().ok_or("unexpected end of file")?;
        self.pos += 1;
        Ok(l)
    }

    fn value(&mut self, key: &str) -> Result<&'a str, String> {
        let l = self.next()?;
        match l.split_once(' ') {
            Some((k, v)) if k == key => Ok(v),
            _ => Err(format!("line {}: expected {key}", self.pos)),
        }
    }

    fn num<T: FromStr>(&mut self, key: &str) -> Result<T, String> {
        let v = self.value(key)?;
        v.parse().map_err(|_| format!("line {}: bad value for {key}: {v:?}", self.pos))
    }

    fn flag(&mut self, key: &str) -> Result<bool, String> {
        match self.value(key)? {
            "1" => Ok(true),
            "0" => Ok(false),
            v => Err(format!("line {}: {key} must be 0 or 1, got {v:?}", self.pos)),
        }
    }

    fn vector(&mut self, name: &str, expected: Option<usize>) -> Result<Vec<f64>, String> {
        let header = self.value("vector")?;
        let (n, len) = header.split_once(' ').ok_or_else(|| format!("line {}: bad vector header", self.pos))?;
        if n != name {
            return Err(format!("line {}: expected vector {name}, found {n}", self.pos));
        }
        let len: usize = len.parse().map_err(|_| format!("line {}: bad vector length", self.pos))?;
        if expected.is_some_and(|e| e != len) {
            return Err(format!("line {}: vector {name} has length {len}, expected {}", self.pos, expected.unwrap_or(0)));
        }
        let mut out = Vec::with_capacity(len);
        while out.len() < len {
            let line = self.next()?;
            for tok in line.split_whitespace() {
                out.push(parse_real(tok, self.pos)?);
            }
        }
        if out.len() != len {
            return Err(format!("line {}: vector {name} overflows its length", self.pos));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rundung_core::eval::Estimator;
    use rundung_core::linear::{LinearSpec, LrParams, TfidfEstimator};

    fn docs() -> Vec<Vec<String>> {
        ["jelek bodoh", "bagus keren", "bodoh sekali", "keren sekali"]
            .iter()
            .map(|d| d.split(' ').map(String::from).collect())
            .collect()
    }

    fn labels() -> Vec<Label> {
        vec![Label::Bullying, Label::NonBullying, Label::Bullying, Label::NonBullying]
    }

    fn artifact(body: ModelBody) -> ModelArtifact {
        ModelArtifact {
            preprocessing_fingerprint: "ab".into(),
            data_fingerprint: "cd".into(),
            seed: 42,
            majority: Label::NonBullying,
            pipeline: PipelineConfig::default(),
            metadata: vec![("note".into(), "two words".into())],
            body,
        }
    }

    #[test]
    fn linear_round_trip() {
        let d = docs();
        let refs: Vec<&[String]> = d.iter().map(|x| x.as_slice()).collect();
        let est = TfidfEstimator {
            spec: LinearSpec::Logistic(LrParams::default()),
            tfidf: TfidfConfig::default(),
        };
        let a = artifact(ModelBody::Linear(est.fit(&refs, &labels()).unwrap()));
        let text = a.to_text();
        let back = ModelArtifact::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.metadata, a.metadata);
        for doc in &d {
            assert_eq!(back.body.predict(doc).0, a.body.predict(doc).0);
        }
    }

    #[test]
    fn version_mismatch_rejected() {
        let d = docs();
        let refs: Vec<&[String]> = d.iter().map(|x| x.as_slice()).collect();
        let est = TfidfEstimator {
            spec: LinearSpec::NaiveBayes { alpha: 1.0 },
            tfidf: TfidfConfig::default(),
        };
        let text = artifact(ModelBody::Linear(est.fit(&refs, &labels()).unwrap())).to_text();
        let bumped = text.replace("format_version 1", "format_version 2");
        assert!(ModelArtifact::parse(&bumped).unwrap_err().contains("format_version"));
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(0.1), "1.00000000000e-1");
        assert_eq!(fmt_real(-1234.5), "-1.23450000000e3");
        assert_eq!(fmt_real(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
