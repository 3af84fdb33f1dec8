//! Command-line interface.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rundung_core::corpus::{compute_stats, stratified_split, validate_corpus, CommentRecord, StdDevKind};
use rundung_core::eval::{metrics, run_benchmark, ConfusionMatrix, Estimator};
use rundung_core::linear::{grid_search, Family, LinearSpec, ParamGrid, ParamSet, TfidfEstimator};
use rundung_core::neural::{fit_neural, ModelKind};
use rundung_core::preprocess::{PipelineConfig, Preprocessor, Stage};
use rundung_core::Label;

use crate::artifact::{ModelArtifact, ModelBody};
use crate::config::RunConfig;
use crate::csv_io::{self, ColumnMap};
use crate::error::{AppError, AppResult};
use crate::lexicons::{path_or_bundled, sha256_hex, LexiconPaths, LexiconSources};
use crate::report;
use crate::synth::synthetic_corpus;

#[derive(Debug, Parser)]
#[command(name = "rundung", version, about = "Cyberbullying detection for Indonesian social-media comments")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cross-validation folds.
    #[arg(long, global = true)]
    pub folds: Option<usize>,
    /// Suppress informational output.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct LexiconArgs {
    /// Slang map (slang<TAB>canonical per line).
    #[arg(long, global = true, value_name = "FILE")]
    pub slang: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    /// Root-word dictionary for the stemmer.
    #[arg(long, global = true, value_name = "FILE")]
    pub roots: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    pub stemmer_rules: Option<PathBuf>,
    /// Disable a pipeline stage (case_fold, clean, normalize_slang,
    /// remove_stopwords, stem, tokenize). Repeatable.
    #[arg(long = "skip", global = true, value_name = "STAGE")]
    pub skip: Vec<String>,
    /// CSV field delimiter.
    #[arg(long, global = true)]
    pub delimiter: Option<char>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Corpus statistics and validation.
    Stats {
        corpus: Option<PathBuf>,
        /// Exit with status 2 when validation finds problems.
        #[arg(long)]
        strict: bool,
        /// Sample (N - 1) instead of population standard deviation.
        #[arg(long)]
        sample_stddev: bool,
        /// Also write the statistics as JSON.
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
    /// Show comments next to their preprocessed tokens.
    Preprocess {
        corpus: Option<PathBuf>,
        /// Process this text instead of a corpus.
        #[arg(long)]
        text: Option<String>,
        /// Show the text after each of the six stages.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Train one model and write it to a file.
    Train {
        corpus: Option<PathBuf>,
        /// nb, lr, svm, bilstm or bilstm_attention.
        #[arg(long)]
        family: Option<String>,
        /// Hyperparameter override, NAME=VALUE. Repeatable.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Grid search with cross-validation, then train the best candidate.
    Tune {
        corpus: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        /// Search axis, NAME=V1,V2,... Repeatable; replaces the configured grid.
        #[arg(long = "grid", value_name = "NAME=VALUES")]
        grid: Vec<String>,
        /// Where to write the full search result as JSON.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Label comments, one per input line.
    Predict {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Input file; standard input when absent.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Accept a model built with different lexicons or stage switches.
        #[arg(long)]
        force: bool,
    },
    /// Score a trained model against a labeled corpus.
    Evaluate {
        corpus: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long)]
        force: bool,
        /// Also write the metrics as JSON.
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
    /// Run the full model comparison and write report files.
    Benchmark {
        corpus: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
        /// Skip the sequence models.
        #[arg(long)]
        no_neural: bool,
    },
    /// Write a synthetic corpus.
    Synth {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

/// Effective settings after merging flags, config file and defaults.
struct Ctx {
    cfg: RunConfig,
    seed: u64,
    folds: usize,
    quiet: bool,
    lexicon: LexiconPaths,
    pipeline: PipelineConfig,
    delimiter: u8,
    columns: ColumnMap,
}

fn stage_by_name(name: &str) -> AppResult<Stage> {
    Stage::ALL
        .into_iter()
        .find(|s| s.name() == name || format!("{s:?}").eq_ignore_ascii_case(name))
        .ok_or_else(|| AppError::Usage(format!("unknown stage {name:?}")))
}

impl Ctx {
    fn new(cli: &Cli) -> AppResult<Self> {
        let cfg = match &cli.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let seed = cli.seed.or(cfg.seed).unwrap_or(42);
        let folds = cli.folds.or(cfg.cv.folds).unwrap_or(5);
        if folds < 2 {
            return Err(AppError::Usage(format!("--folds must be at least 2, got {folds}")));
        }
        let mut lexicon = cfg.lexicon_paths();
        let a = &cli.lexicon;
        for (slot, flag) in [
            (&mut lexicon.slang, &a.slang),
            (&mut lexicon.stopwords, &a.stopwords),
            (&mut lexicon.roots, &a.roots),
            (&mut lexicon.stemmer_rules, &a.stemmer_rules),
        ] {
            if flag.is_some() {
                slot.clone_from(flag);
            }
        }
        lexicon.check_exist()?;
        let mut pipeline = cfg.pipeline();
        for s in &a.skip {
            pipeline.set(stage_by_name(s)?, false);
        }
        let delimiter = match a.delimiter {
            Some(c) if c.is_ascii() => c as u8,
            Some(c) => return Err(AppError::Usage(format!("delimiter {c:?} is not ASCII"))),
            None => cfg.delimiter()?,
        };
        let columns = cfg.columns();
        Ok(Ctx {
            cfg,
            seed,
            folds,
            quiet: cli.quiet,
            lexicon,
            pipeline,
            delimiter,
            columns,
        })
    }

    fn corpus_path(&self, arg: &Option<PathBuf>) -> AppResult<PathBuf> {
        arg.clone()
            .or_else(|| self.cfg.corpus.path.clone())
            .ok_or_else(|| AppError::Usage("no corpus given (argument or [corpus] path in the config)".into()))
    }

    fn load(&self, arg: &Option<PathBuf>) -> AppResult<Vec<CommentRecord>> {
        let path = self.corpus_path(arg)?;
        csv_io::load_corpus(&path, self.delimiter, &self.columns)
    }

    fn sources(&self) -> AppResult<LexiconSources> {
        self.lexicon.read()
    }

    fn preprocessor(&self) -> AppResult<(Preprocessor, String)> {
        let sources = self.sources()?;
        Ok((sources.build(self.pipeline)?, sources.fingerprint(&self.pipeline)))
    }

    fn family(&self, arg: &Option<String>) -> AppResult<String> {
        arg.clone()
            .or_else(|| self.cfg.model.family.clone())
            .ok_or_else(|| AppError::Usage("no model family given (--family or [model] family)".into()))
    }
}

fn parse_kv(s: &str) -> AppResult<(String, &str)> {
    let (k, v) = s.split_once('=').ok_or_else(|| AppError::Usage(format!("expected NAME=VALUE, got {s:?}")))?;
    Ok((k.trim().to_string(), v.trim()))
}

fn parse_f64(s: &str) -> AppResult<f64> {
    s.parse().map_err(|_| AppError::Usage(format!("not a number: {s:?}")))
}

pub fn data_fingerprint(records: &[CommentRecord]) -> String {
    let mut buf = String::new();
    for r in records {
        buf.push_str(&format!("{}\t{}\t{}\n", r.index, r.label.id(), r.text));
    }
    sha256_hex(buf.as_bytes())
}

fn training(e: rundung_core::Error) -> AppError {
    AppError::Training(e)
}

fn io_out(e: std::io::Error) -> AppError {
    AppError::io("<stdout>", e)
}

fn info(ctx: &Ctx, out: &mut dyn Write, msg: impl AsRef<str>) -> AppResult<()> {
    if !ctx.quiet {
        writeln!(out, "{}", msg.as_ref()).map_err(io_out)?;
    }
    Ok(())
}

fn majority(labels: &[Label]) -> Label {
    rundung_core::neural::majority_label(labels)
}

/// Parses CLI output from `args`, runs it and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(AppError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> AppResult<i32> {
    let ctx = Ctx::new(cli)?;
    match &cli.command {
        Command::Stats {
            corpus,
            strict,
            sample_stddev,
            json,
        } => cmd_stats(&ctx, corpus, *strict, *sample_stddev, json.as_deref(), out, err),
        Command::Preprocess { corpus, text, trace, limit } => cmd_preprocess(&ctx, corpus, text.as_deref(), *trace, *limit, out),
        Command::Train { corpus, family, params, out: path } => {
            let records = ctx.load(corpus)?;
            let family = ctx.family(family)?;
            let mut p = ctx.cfg.model_params();
            for kv in params {
                let (k, v) = parse_kv(kv)?;
                p = p.with(&k, parse_f64(v)?);
            }
            let artifact = train_artifact(&ctx, &records, &family, &p)?;
            artifact.save(path)?;
            info(&ctx, out, format!("wrote {} model to {}", artifact.family_tag(), path.display()))?;
            Ok(0)
        }
        Command::Tune {
            corpus,
            family,
            grid,
            report,
            out: path,
        } => cmd_tune(&ctx, corpus, family, grid, report.as_deref(), path, out),
        Command::Predict { model, input, force } => cmd_predict(&ctx, model, input.as_deref(), *force, out, err),
        Command::Evaluate { corpus, model, force, json } => cmd_evaluate(&ctx, corpus, model, *force, json.as_deref(), out, err),
        Command::Benchmark { corpus, out_dir, no_neural } => cmd_benchmark(&ctx, corpus, out_dir.as_deref(), *no_neural, out, err),
        Command::Synth { n, out: path } => {
            if *n < 2 {
                return Err(AppError::Usage("--n must be at least 2".into()));
            }
            let records = synthetic_corpus(*n, ctx.seed);
            let file = std::fs::File::create(path).map_err(|e| AppError::io(path, e))?;
            csv_io::write_corpus(std::io::BufWriter::new(file), &records, ctx.delimiter, &ctx.columns)?;
            info(&ctx, out, format!("wrote {n} comments to {}", path.display()))?;
            Ok(0)
        }
    }
}

fn cmd_stats(
    ctx: &Ctx,
    corpus: &Option<PathBuf>,
    strict: bool,
    sample: bool,
    json: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> AppResult<i32> {
    let path = ctx.corpus_path(corpus)?;
    let rows = csv_io::load_raw(&path, ctx.delimiter, &ctx.columns)?;
    let validation = validate_corpus(&rows);
    let records: Vec<CommentRecord> = rows.iter().filter_map(|r| r.to_record().ok()).collect();
    let kind = if sample { StdDevKind::Sample } else { StdDevKind::Population };
    let stats = if records.is_empty() { None } else { Some(compute_stats(&records, kind).map_err(training)?) };
    write!(out, "{}", report::stats_text(stats.as_ref(), &validation)).map_err(io_out)?;
    if let Some(p) = json {
        report::write_json(p, &serde_json::json!({ "stats": stats, "validation": validation }))?;
    }
    if strict && !validation.is_clean() {
        let _ = writeln!(err, "error: validation failed");
        return Ok(2);
    }
    Ok(0)
}

fn cmd_preprocess(ctx: &Ctx, corpus: &Option<PathBuf>, text: Option<&str>, trace: bool, limit: Option<usize>, out: &mut dyn Write) -> AppResult<i32> {
    let (pre, _) = ctx.preprocessor()?;
    let texts: Vec<(String, String)> = match text {
        Some(t) => vec![("-".into(), t.to_string())],
        None => ctx.load(corpus)?.into_iter().map(|r| (r.index.to_string(), r.text)).collect(),
    };
    let n = limit.unwrap_or(texts.len()).min(texts.len());
    if trace {
        let names: Vec<&str> = Stage::ALL.iter().map(|s| s.name()).collect();
        writeln!(out, "no\traw\t{}", names.join("\t")).map_err(io_out)?;
    } else {
        writeln!(out, "no\traw\ttokens").map_err(io_out)?;
    }
    for (index, raw) in &texts[..n] {
        let flat = raw.replace(['\t', '\n', '\r'], " ");
        if trace {
            let t = pre.trace(raw);
            writeln!(out, "{index}\t{flat}\t{}", t.after.join("\t")).map_err(io_out)?;
        } else {
            writeln!(out, "{index}\t{flat}\t{}", pre.run(raw).join(" ")).map_err(io_out)?;
        }
    }
    Ok(0)
}

enum Target {
    Linear(Family),
    Neural(ModelKind),
}

fn parse_target(name: &str) -> AppResult<Target> {
    if let Some(k) = ModelKind::parse(name) {
        return Ok(Target::Neural(k));
    }
    Family::parse(name).map(Target::Linear).map_err(|e| AppError::Usage(e.to_string()))
}

fn train_artifact(ctx: &Ctx, records: &[CommentRecord], family: &str, params: &ParamSet) -> AppResult<ModelArtifact> {
    if records.is_empty() {
        return Err(AppError::Validation("corpus has no records".into()));
    }
    let (pre, fingerprint) = ctx.preprocessor()?;
    let labels: Vec<Label> = records.iter().map(|r| r.label).collect();
    let mut metadata = vec![
        ("records".to_string(), records.len().to_string()),
        ("lexicon.slang".to_string(), path_or_bundled(&ctx.lexicon.slang)),
        ("lexicon.stopwords".to_string(), path_or_bundled(&ctx.lexicon.stopwords)),
        ("lexicon.roots".to_string(), path_or_bundled(&ctx.lexicon.roots)),
        ("lexicon.stemmer_rules".to_string(), path_or_bundled(&ctx.lexicon.stemmer_rules)),
    ];
    let body = match parse_target(family)? {
        Target::Linear(family) => {
            let docs: Vec<Vec<String>> = records.iter().map(|r| pre.run(&r.text)).collect();
            let refs: Vec<&[String]> = docs.iter().map(Vec::as_slice).collect();
            let spec = LinearSpec::from_params(family, params, ctx.seed).map_err(|e| AppError::Usage(e.to_string()))?;
            let tfidf = ctx.cfg.tfidf();
            metadata.push(("params".into(), format!("{spec:?}")));
            metadata.push(("tfidf".into(), format!("{tfidf:?}")));
            ModelBody::Linear(TfidfEstimator { spec, tfidf }.fit(&refs, &labels).map_err(training)?)
        }
        Target::Neural(kind) => {
            if !params.0.is_empty() {
                return Err(AppError::Usage("neural models take their settings from the [neural] config section".into()));
            }
            let mut cfg = ctx.cfg.train_config(ctx.seed);
            let skip = ctx.cfg.neural.skip_stop_and_stem.unwrap_or(false);
            let neural_pre = if skip { pre.with_config(pre.config.without_stop_and_stem()) } else { pre.clone() };
            let docs: Vec<Vec<String>> = records.iter().map(|r| neural_pre.run(&r.text)).collect();
            let split = stratified_split(&labels, &ctx.cfg.split(ctx.seed)).map_err(|e| AppError::Usage(e.to_string()))?;
            let pick_docs = |idx: &[usize]| idx.iter().map(|&i| docs[i].clone()).collect::<Vec<_>>();
            let pick_labels = |idx: &[usize]| idx.iter().map(|&i| labels[i]).collect::<Vec<_>>();
            cfg.seed = ctx.seed;
            let (model, trace) = fit_neural(
                kind,
                &pick_docs(&split.train),
                &pick_labels(&split.train),
                &pick_docs(&split.val),
                &pick_labels(&split.val),
                &cfg,
            )
            .map_err(training)?;
            metadata.push(("train_config".into(), format!("{cfg:?}")));
            metadata.push(("split".into(), format!("{}/{}/{}", split.train.len(), split.val.len(), split.test.len())));
            metadata.push(("best_epoch".into(), trace.best_epoch.to_string()));
            metadata.push(("stopped_epoch".into(), trace.stopped_epoch.to_string()));
            metadata.push(("skip_stop_and_stem".into(), skip.to_string()));
            ModelBody::Neural(model)
        }
    };
    let pipeline = match &body {
        ModelBody::Neural(_) if ctx.cfg.neural.skip_stop_and_stem.unwrap_or(false) => ctx.pipeline.without_stop_and_stem(),
        _ => ctx.pipeline,
    };
    let preprocessing_fingerprint = if pipeline == ctx.pipeline {
        fingerprint
    } else {
        ctx.sources()?.fingerprint(&pipeline)
    };
    Ok(ModelArtifact {
        preprocessing_fingerprint,
        data_fingerprint: data_fingerprint(records),
        seed: ctx.seed,
        majority: majority(&labels),
        pipeline,
        metadata,
        body,
    })
}

fn cmd_tune(
    ctx: &Ctx,
    corpus: &Option<PathBuf>,
    family: &Option<String>,
    axes: &[String],
    report_path: Option<&Path>,
    path: &Path,
    out: &mut dyn Write,
) -> AppResult<i32> {
    let records = ctx.load(corpus)?;
    let name = ctx.family(family)?;
    let family = match parse_target(&name)? {
        Target::Linear(f) => f,
        Target::Neural(_) => return Err(AppError::Usage("tune supports nb, lr and svm".into())),
    };
    let grid = if axes.is_empty() {
        ctx.cfg.grid(family)?
    } else {
        let mut g = ParamGrid::new();
        for a in axes {
            let (k, vs) = parse_kv(a)?;
            let values = vs.split(',').map(parse_f64).collect::<AppResult<Vec<f64>>>()?;
            g = g.axis(&k, &values);
        }
        g
    };
    let (pre, _) = ctx.preprocessor()?;
    let docs: Vec<Vec<String>> = records.iter().map(|r| pre.run(&r.text)).collect();
    let labels: Vec<Label> = records.iter().map(|r| r.label).collect();
    let objective = ctx.cfg.objective()?;
    let result = grid_search(family, &grid, &docs, &labels, ctx.folds, ctx.seed, objective, ctx.cfg.tfidf()).map_err(|e| match e {
        rundung_core::Error::InvalidParameter(_) | rundung_core::Error::UnknownFamily(_) => AppError::Usage(e.to_string()),
        other => training(other),
    })?;
    if !ctx.quiet {
        write!(out, "{}", report::grid_text(&result)).map_err(io_out)?;
    }
    if let Some(p) = report_path {
        report::write_json(p, &result)?;
    }
    let artifact = train_artifact(ctx, &records, family.tag(), &result.best_params)?;
    artifact.save(path)?;
    info(ctx, out, format!("best {} ({} {:.4}); wrote {}", result.best_params, objective.name(), result.best_score, path.display()))?;
    Ok(0)
}

fn load_model(ctx: &Ctx, model: &Path, force: bool, err: &mut dyn Write) -> AppResult<(ModelArtifact, Preprocessor)> {
    let artifact = ModelArtifact::load(model)?;
    let sources = ctx.sources()?;
    let neural_skip = matches!(artifact.body, ModelBody::Neural(_))
        && artifact.metadata.iter().any(|(k, v)| k == "skip_stop_and_stem" && v == "true");
    let pipeline = if neural_skip { ctx.pipeline.without_stop_and_stem() } else { ctx.pipeline };
    let live = sources.fingerprint(&pipeline);
    if live != artifact.preprocessing_fingerprint {
        if !force {
            return Err(AppError::Usage(format!(
                "{} was built with different lexicons or pipeline settings; use --force to override",
                model.display()
            )));
        }
        let _ = writeln!(err, "warning: preprocessing fingerprint differs from the model's");
    }
    let pre = sources.build(artifact.pipeline)?;
    Ok((artifact, pre))
}

fn cmd_predict(ctx: &Ctx, model: &Path, input: Option<&Path>, force: bool, out: &mut dyn Write, err: &mut dyn Write) -> AppResult<i32> {
    let (artifact, pre) = load_model(ctx, model, force, err)?;
    let lines: Vec<String> = match input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| AppError::io(p, e))?.lines().map(String::from).collect(),
        None => std::io::stdin().lock().lines().collect::<Result<_, _>>().map_err(|e| AppError::io("<stdin>", e))?,
    };
    for (i, line) in lines.iter().enumerate() {
        let tokens = pre.run(line);
        if tokens.is_empty() {
            let _ = writeln!(err, "warning: line {}: nothing left after preprocessing; using the majority label", i + 1);
            writeln!(out, "{}\t-", artifact.majority).map_err(io_out)?;
            continue;
        }
        let (label, score, _) = artifact.body.predict(&tokens);
        writeln!(out, "{label}\t{score:.6}").map_err(io_out)?;
    }
    Ok(0)
}

fn cmd_evaluate(
    ctx: &Ctx,
    corpus: &Option<PathBuf>,
    model: &Path,
    force: bool,
    json: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> AppResult<i32> {
    let (artifact, pre) = load_model(ctx, model, force, err)?;
    let records = ctx.load(corpus)?;
    let mut cm = ConfusionMatrix::default();
    let mut fallback = 0usize;
    for r in &records {
        let tokens = pre.run(&r.text);
        let predicted = if tokens.is_empty() {
            fallback += 1;
            artifact.majority
        } else {
            artifact.body.predict(&tokens).0
        };
        cm.add(r.label, predicted);
    }
    if cm.total() == 0 {
        return Err(AppError::Validation("corpus has no records".into()));
    }
    if fallback > 0 {
        let _ = writeln!(err, "warning: {fallback} comment(s) empty after preprocessing; scored with the majority label");
    }
    let m = metrics(&cm);
    out.write_all(report::metrics_text(artifact.family_tag(), &cm, &m).as_bytes()).map_err(io_out)?;
    if let Some(p) = json {
        report::write_json(p, &m)?;
    }
    Ok(0)
}

fn cmd_benchmark(ctx: &Ctx, corpus: &Option<PathBuf>, out_dir: Option<&Path>, no_neural: bool, out: &mut dyn Write, err: &mut dyn Write) -> AppResult<i32> {
    let start = Instant::now();
    let records = ctx.load(corpus)?;
    let validation = validate_corpus(&records.iter().map(Into::into).collect::<Vec<_>>());
    if !validation.is_clean() {
        let _ = writeln!(err, "warning: corpus has validation findings; run `stats` for details");
    }
    let (pre, _) = ctx.preprocessor()?;
    let mut config = ctx.cfg.benchmark(ctx.seed, ctx.folds)?;
    if no_neural {
        config.run_neural = false;
    }
    let result = run_benchmark(&records, &pre, &config).map_err(|e| match e {
        rundung_core::Error::InvalidSplit(_) | rundung_core::Error::InvalidParameter(_) => AppError::Usage(e.to_string()),
        other => training(other),
    })?;
    let tables = result.render_tables();
    if let Some(dir) = out_dir.map(Path::to_path_buf).or_else(|| ctx.cfg.output.dir.clone()) {
        std::fs::create_dir_all(&dir).map_err(|e| AppError::io(&dir, e))?;
        let txt = dir.join("benchmark.txt");
        std::fs::write(&txt, &tables).map_err(|e| AppError::io(&txt, e))?;
        report::write_json(&dir.join("benchmark.json"), &result)?;
        info(ctx, out, format!("wrote {} and benchmark.json", txt.display()))?;
    }
    if !ctx.quiet {
        write!(out, "{tables}").map_err(io_out)?;
        writeln!(out, "elapsed: {:.1}s", start.elapsed().as_secs_f64()).map_err(io_out)?;
    }
    if result.any_zero_division() {
        let _ = writeln!(err, "warning: some metrics had zero denominators and were reported as 0");
    }
    Ok(0)
}
